#pragma once

#include <span>
#include <vector>

#include "vlp/geometry.hpp"
#include "vlp/layout.hpp"
#include "vlp/parallel.hpp"

namespace vlp {

struct Observation {
  WorldPoint led;
  PixelPoint pixel;
};

struct ZSearch {
  double z_min = -2.70;
  double z_max = 2.70;
  double step = 1e-3;
};

struct PositionEstimate {
  double x = 0.0, y = 0.0, z = 0.0;
  double distortion = 0.0;       // D at the optimum, m^2
  bool underdetermined = false;  // single observation: D == 0 for every z
};

// Quantized (or exact) pixel observations of the captured LEDs for a
// horizontal pose (R = I). Throws NoCapturedLeds via EmptyObservations when
// the FOV cone contains nothing.
std::vector<Observation> synthesize_observations(std::span<const WorldPoint> leds,
                                                 const CameraPose& pose,
                                                 const CameraIntrinsics& intr,
                                                 Quantization q);

// The averaging estimator at a fixed height guess: inverts the horizontal
// projection per observation and averages,
//   x_hat = mean_i[ x_i + (u_i - u0) * s_x * (z_i - z_guess) / f ].
std::pair<double, double> estimate_xy(std::span<const Observation> obs,
                                      double z_guess,
                                      const CameraIntrinsics& intr);

// Square-based distortion D(z): the spread of the per-LED position solutions
// around their mean at height z.
double distortion_at(std::span<const Observation> obs, double z,
                     const CameraIntrinsics& intr);

// Height by exhaustive search of D over the z grid (ties break toward the
// smaller z), then estimate_xy at the optimum. D is quadratic in z, so the
// grid argmin reduces to the two grid neighbours of the parabola vertex.
PositionEstimate estimate_position(std::span<const Observation> obs,
                                   const ZSearch& grid,
                                   const CameraIntrinsics& intr);

double position_error(const PositionEstimate& est, const WorldPoint& truth);

struct ErrorSample {
  double x = 0.0, y = 0.0;  // receiver position
  double h = 0.0;           // receiver height
  double pixel_scale = 1.0;
  std::size_t n_captured = 0;
  double error_m = 0.0;
};

struct ErrorBin {
  std::size_t n_captured = 0;
  double mean_error = 0.0;
  std::size_t samples = 0;         // rows aggregated into the bin
  std::size_t receiver_points = 0; // distinct receiver locations in the bin
};

struct ErrorExperiment {
  std::vector<ErrorSample> rows;              // sorted by (h, point, scale)
  std::vector<std::vector<ErrorBin>> bins;    // one vector per height
};

// Deterministic sweep over receiver points x heights x pixel scales for a
// horizontal camera under the given layout; errors from quantized pixels.
ErrorExperiment run_error_experiment(const LedLayout& layout,
                                     std::span<const WorldPoint> receiver_xy,
                                     std::span<const double> heights,
                                     std::span<const double> pixel_scales,
                                     const CameraIntrinsics& intr,
                                     const ZSearch& grid,
                                     Quantization q = Quantization::HalfInteger,
                                     Exec exec = Exec::Parallel);

}  // namespace vlp
