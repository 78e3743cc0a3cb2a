#pragma once

#include <span>
#include <vector>

#include "vlp/geometry.hpp"
#include "vlp/parallel.hpp"

namespace vlp {

// Rotated LED offsets and their ratios for one LED:
//   A = R3.(L - C), B = R1.(L - C), C = R2.(L - C); M = B/A, N = C/A.
// m and n are the parallel-plane slopes -(dx)/(dz), -(dy)/(dz).
struct ProjectionCoefficients {
  double A = 0.0, B = 0.0, C = 0.0;
  double M = 0.0, N = 0.0;
  double m = 0.0, n = 0.0;
};

ProjectionCoefficients projection_coefficients(const WorldPoint& led,
                                               const CameraPose& pose);

// The 2n x 3 matrix of pixel-coordinate derivatives with respect to the
// camera center; rows come in (u, v) pairs per LED.
struct JacobianMatrix {
  std::vector<std::array<double, 3>> rows;

  std::size_t led_count() const { return rows.size() / 2; }
};

// Derivative matrix of all LED pixel coordinates w.r.t. the camera center:
// row pair i is -f/(s*A_i) * [M_i*R3k - R1k] and -f/(s*A_i) * [N_i*R3k - R2k].
JacobianMatrix jacobian_general(std::span<const WorldPoint> leds,
                                const CameraPose& pose,
                                const CameraIntrinsics& intr);

// Parallel-plane Jacobian assembled directly from measured pixels:
// row pair (f/(s_x*depth)) * [cos tz, -sin tz, (u-u0)*s_x/f] and
// (f/(s_y*depth)) * [sin tz, cos tz, (v-v0)*s_y/f].
JacobianMatrix jacobian_from_pixels(std::span<const PixelPoint> pixels,
                                    double theta_z, double depth,
                                    const CameraIntrinsics& intr);

// Positive singular values of the Jacobian, descending. sigma_i^2 are the
// eigenvalues of the 3x3 Gram matrix J^T J (cyclic Jacobi sweeps); a value is
// retained iff sigma_i > 1e-10 * sigma_max.
struct SingularSpectrum {
  std::vector<double> sigma;
  int rank = 0;
  bool rank_deficient = false;  // rank < 3
};

SingularSpectrum singular_spectrum(const JacobianMatrix& j);

inline constexpr double kRankTolerance = 1e-10;

struct NpemResult {
  double value = 0.0;
  int rank = 0;
  bool rank_deficient = false;
};

// sqrt(beta * sum over retained sigma of 1/sigma^2). Throws RankZero when no
// singular value survives the rank tolerance.
NpemResult npem_full(const JacobianMatrix& j, double beta);
double npem(const JacobianMatrix& j, double beta);

// Closed-form parallel-plane NPEM: the Gram eigenvalues {n, (S+n±2r_n)/2}
// evaluated with the printed pairwise-sum radicand for 2r_n. Requires
// theta_x = theta_y = 0 and a common LED height. Independent of theta_z.
// A radicand below -1e-9 (relative) raises NumericalConsistencyError.
NpemResult npem_closed_form_parallel(std::span<const WorldPoint> leds,
                                     const CameraPose& pose,
                                     const CameraIntrinsics& intr, double beta);

struct AngleGrid {
  std::vector<double> theta_x;
  std::vector<double> theta_y;
  std::vector<double> theta_z;

  std::size_t size() const {
    return theta_x.size() * theta_y.size() * theta_z.size();
  }
};

// Inclusive [lo, hi] with the given step (grid notation "(a:s:b)").
std::vector<double> inclusive_range(double lo, double hi, double step);

// Interior multiples of `step` strictly inside (-pi/2, pi/2).
std::vector<double> open_symmetric_range(double step);

struct MinNpemResult {
  RotationAngles angles;
  double npem = 0.0;
  std::size_t captured = 0;
};

// Minimum full-rank NPEM over the angle grid among poses capturing >= 3 LEDs.
// Deterministic: tied minima resolve to the first triple in row-major
// (theta_x, theta_y, theta_z) order. Throws NoValidPose when nothing
// qualifies.
MinNpemResult min_npem_over_rotations(std::span<const WorldPoint> leds,
                                      const WorldPoint& center,
                                      const CameraIntrinsics& intr, double beta,
                                      const AngleGrid& grid,
                                      Exec exec = Exec::Parallel);

}  // namespace vlp
