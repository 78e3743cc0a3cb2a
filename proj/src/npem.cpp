#include "vlp/npem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlp/layout.hpp"

namespace vlp {

ProjectionCoefficients projection_coefficients(const WorldPoint& led,
                                               const CameraPose& pose) {
  const RotationMatrix r = rotation_matrix(pose.angles);
  const double dx = led.x - pose.center.x;
  const double dy = led.y - pose.center.y;
  const double dz = led.z - pose.center.z;
  ProjectionCoefficients pc;
  pc.B = r(0, 0) * dx + r(0, 1) * dy + r(0, 2) * dz;
  pc.C = r(1, 0) * dx + r(1, 1) * dy + r(1, 2) * dz;
  pc.A = r(2, 0) * dx + r(2, 1) * dy + r(2, 2) * dz;
  if (pc.A != 0.0) {
    pc.M = pc.B / pc.A;
    pc.N = pc.C / pc.A;
  }
  if (dz != 0.0) {
    pc.m = -dx / dz;
    pc.n = -dy / dz;
  }
  return pc;
}

JacobianMatrix jacobian_general(std::span<const WorldPoint> leds,
                                const CameraPose& pose,
                                const CameraIntrinsics& intr) {
  if (leds.empty()) throw EmptyScene("jacobian_general: no LEDs");
  const RotationMatrix r = rotation_matrix(pose.angles);
  JacobianMatrix j;
  j.rows.reserve(2 * leds.size());
  for (const WorldPoint& led : leds) {
    const ProjectionCoefficients pc = projection_coefficients(led, pose);
    if (pc.A == 0.0) throw DegenerateDepth("jacobian_general: A_i = 0");
    const double gu = -intr.f / (intr.s_x * pc.A);
    const double gv = -intr.f / (intr.s_y * pc.A);
    j.rows.push_back({gu * (pc.M * r(2, 0) - r(0, 0)),
                      gu * (pc.M * r(2, 1) - r(0, 1)),
                      gu * (pc.M * r(2, 2) - r(0, 2))});
    j.rows.push_back({gv * (pc.N * r(2, 0) - r(1, 0)),
                      gv * (pc.N * r(2, 1) - r(1, 1)),
                      gv * (pc.N * r(2, 2) - r(1, 2))});
  }
  return j;
}

JacobianMatrix jacobian_from_pixels(std::span<const PixelPoint> pixels,
                                    double theta_z, double depth,
                                    const CameraIntrinsics& intr) {
  if (depth == 0.0) throw DegenerateDepth("jacobian_from_pixels: zero depth");
  const double cz = std::cos(theta_z), sz = std::sin(theta_z);
  const double gu = intr.f / (intr.s_x * depth);
  const double gv = intr.f / (intr.s_y * depth);
  JacobianMatrix j;
  j.rows.reserve(2 * pixels.size());
  for (const PixelPoint& p : pixels) {
    j.rows.push_back({gu * cz, gu * -sz, gu * (p.u - intr.u0) * intr.s_x / intr.f});
    j.rows.push_back({gv * sz, gv * cz, gv * (p.v - intr.v0) * intr.s_y / intr.f});
  }
  return j;
}

namespace {

using Sym3 = std::array<double, 6>;  // packed upper triangle: 00 01 02 11 12 22

Sym3 gram(const JacobianMatrix& j) {
  Sym3 g{0, 0, 0, 0, 0, 0};
  for (const auto& row : j.rows) {
    g[0] += row[0] * row[0];
    g[1] += row[0] * row[1];
    g[2] += row[0] * row[2];
    g[3] += row[1] * row[1];
    g[4] += row[1] * row[2];
    g[5] += row[2] * row[2];
  }
  return g;
}

// Eigenvalues of a symmetric 3x3 by cyclic Jacobi rotations.
std::array<double, 3> jacobi_eigenvalues(Sym3 g) {
  double a[3][3] = {{g[0], g[1], g[2]}, {g[1], g[3], g[4]}, {g[2], g[4], g[5]}};
  const double scale =
      std::max({std::abs(a[0][0]), std::abs(a[1][1]), std::abs(a[2][2]),
                std::abs(a[0][1]), std::abs(a[0][2]), std::abs(a[1][2]), 1e-300});
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off <= 1e-14 * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double apq = a[p][q];
        a[p][p] -= t * apq;
        a[q][q] += t * apq;
        a[p][q] = a[q][p] = 0.0;
        for (int k = 0; k < 3; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = a[p][k] = c * akp - s * akq;
          a[k][q] = a[q][k] = s * akp + c * akq;
        }
      }
    }
  }
  std::array<double, 3> ev{a[0][0], a[1][1], a[2][2]};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

NpemResult npem_from_eigenvalues(const std::array<double, 3>& lambda, double beta) {
  const double sigma_max = std::sqrt(std::max(lambda[0], 0.0));
  const double cutoff = kRankTolerance * sigma_max;
  NpemResult res;
  double sum = 0.0;
  for (double lam : lambda) {
    const double sigma = std::sqrt(std::max(lam, 0.0));
    if (sigma > cutoff && sigma > 0.0) {
      sum += 1.0 / lam;
      ++res.rank;
    }
  }
  if (res.rank == 0) throw RankZero("npem: all singular values below tolerance");
  res.rank_deficient = res.rank < 3;
  res.value = std::sqrt(beta * sum);
  return res;
}

}  // namespace

SingularSpectrum singular_spectrum(const JacobianMatrix& j) {
  if (j.rows.empty()) throw EmptyScene("singular_spectrum: empty matrix");
  const std::array<double, 3> ev = jacobi_eigenvalues(gram(j));
  SingularSpectrum s;
  const double sigma_max = std::sqrt(std::max(ev[0], 0.0));
  const double cutoff = kRankTolerance * sigma_max;
  for (double lam : ev) {
    const double sig = std::sqrt(std::max(lam, 0.0));
    if (sig > cutoff && sig > 0.0) s.sigma.push_back(sig);
  }
  s.rank = static_cast<int>(s.sigma.size());
  s.rank_deficient = s.rank < 3;
  return s;
}

NpemResult npem_full(const JacobianMatrix& j, double beta) {
  if (j.rows.empty()) throw EmptyScene("npem: empty matrix");
  return npem_from_eigenvalues(jacobi_eigenvalues(gram(j)), beta);
}

double npem(const JacobianMatrix& j, double beta) {
  return npem_full(j, beta).value;
}

NpemResult npem_closed_form_parallel(std::span<const WorldPoint> leds,
                                     const CameraPose& pose,
                                     const CameraIntrinsics& intr, double beta) {
  if (leds.empty()) throw EmptyScene("npem_closed_form_parallel: no LEDs");
  if (!pose.angles.parallel())
    throw ConfigError("npem_closed_form_parallel: requires theta_x = theta_y = 0");
  const double n = static_cast<double>(leds.size());
  const double depth = leds[0].z - pose.center.z;
  if (depth == 0.0) throw DegenerateDepth("npem_closed_form_parallel: zero depth");

  std::vector<double> m(leds.size()), nn(leds.size());
  for (std::size_t i = 0; i < leds.size(); ++i) {
    m[i] = -(leds[i].x - pose.center.x) / depth;
    nn[i] = -(leds[i].y - pose.center.y) / depth;
  }

  double sum_sq = 0.0;       // S = sum(m^2 + n^2)
  double sum_quartic = 0.0;  // sum(m^4 + n^4)
  double sum_m2 = 0.0, sum_n2 = 0.0;
  for (std::size_t i = 0; i < leds.size(); ++i) {
    sum_sq += m[i] * m[i] + nn[i] * nn[i];
    sum_quartic += m[i] * m[i] * m[i] * m[i] + nn[i] * nn[i] * nn[i] * nn[i];
    sum_m2 += m[i] * m[i];
    sum_n2 += nn[i] * nn[i];
  }
  double pair_sq = 0.0;     // sum_{i<j} (m_i^2 m_j^2 + n_i^2 n_j^2)
  double pair_cross = 0.0;  // sum_{i<j} (m_i m_j + n_i n_j)
  for (std::size_t i = 0; i < leds.size(); ++i) {
    for (std::size_t jj = i + 1; jj < leds.size(); ++jj) {
      pair_sq += m[i] * m[i] * m[jj] * m[jj] + nn[i] * nn[i] * nn[jj] * nn[jj];
      pair_cross += m[i] * m[jj] + nn[i] * nn[jj];
    }
  }
  const double cross_all = sum_m2 * sum_n2;  // sum_{i,j} m_i^2 n_j^2

  const double terms[] = {sum_quartic,
                          2.0 * pair_sq,
                          2.0 * cross_all,
                          -2.0 * (n - 2.0) * sum_sq,
                          8.0 * pair_cross,
                          n * n};
  double radicand = 0.0, magnitude = 0.0;
  for (double t : terms) {
    radicand += t;
    magnitude += std::abs(t);
  }
  if (radicand < -1e-9 * std::max(1.0, magnitude))
    throw NumericalConsistencyError(
        "npem_closed_form_parallel: negative radicand beyond roundoff");
  const double two_rn = std::sqrt(std::max(radicand, 0.0));

  const double unit = intr.f / (intr.s_x * depth);
  const double scale2 = unit * unit;
  const std::array<double, 3> lambda_raw{n, (sum_sq + n + two_rn) / 2.0,
                                         (sum_sq + n - two_rn) / 2.0};
  std::array<double, 3> lambda{};
  for (int i = 0; i < 3; ++i) lambda[i] = scale2 * lambda_raw[i];
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return npem_from_eigenvalues(lambda, beta);
}

std::vector<double> inclusive_range(double lo, double hi, double step) {
  if (step <= 0.0 || hi < lo) throw InvalidGrid("inclusive_range: bad bounds/step");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  out.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::vector<double> open_symmetric_range(double step) {
  if (step <= 0.0) throw InvalidGrid("open_symmetric_range: bad step");
  std::vector<double> out;
  const auto kmax = static_cast<long>(std::ceil(M_PI_2 / step - 1e-9)) - 1;
  for (long k = -kmax; k <= kmax; ++k) out.push_back(static_cast<double>(k) * step);
  return out;
}

MinNpemResult min_npem_over_rotations(std::span<const WorldPoint> leds,
                                      const WorldPoint& center,
                                      const CameraIntrinsics& intr, double beta,
                                      const AngleGrid& grid, Exec exec) {
  if (grid.size() == 0) throw InvalidGrid("min_npem_over_rotations: empty grid");
  struct Cell {
    double value = std::numeric_limits<double>::infinity();
    std::size_t captured = 0;
    bool valid = false;
  };
  std::vector<Cell> cells(grid.size());
  const std::size_t nz = grid.theta_z.size();
  const std::size_t ny = grid.theta_y.size();
  parallel_for(grid.size(), exec, [&](std::size_t idx) {
    const std::size_t ix = idx / (ny * nz);
    const std::size_t iy = (idx / nz) % ny;
    const std::size_t iz = idx % nz;
    const CameraPose pose{center,
                          {grid.theta_x[ix], grid.theta_y[iy], grid.theta_z[iz]}};
    const std::vector<std::size_t> captured = captured_indices(leds, pose, intr);
    if (captured.size() < 3) return;
    std::vector<WorldPoint> subset;
    subset.reserve(captured.size());
    for (std::size_t k : captured) subset.push_back(leds[k]);
    const JacobianMatrix j = jacobian_general(subset, pose, intr);
    const NpemResult r = npem_full(j, beta);
    if (r.rank_deficient) return;
    cells[idx] = {r.value, captured.size(), true};
  });
  std::size_t best = grid.size();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].valid) continue;
    if (best == grid.size() || cells[i].value < cells[best].value) best = i;
  }
  if (best == grid.size())
    throw NoValidPose("min_npem_over_rotations: no pose captures >= 3 LEDs");
  const std::size_t ix = best / (ny * nz);
  const std::size_t iy = (best / nz) % ny;
  const std::size_t iz = best % nz;
  return {{grid.theta_x[ix], grid.theta_y[iy], grid.theta_z[iz]},
          cells[best].value,
          cells[best].captured};
}

}  // namespace vlp
