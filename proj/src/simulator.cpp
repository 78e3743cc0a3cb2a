#include "vlp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace vlp {

namespace {

// Per-observation affine solution x_i(z) = ax - gx*z (and same for y):
// gx = (u_i - u0)*s_x/f, ax = x_i + gx*z_i.
struct Affine {
  double ax, gx, ay, gy;
};

std::vector<Affine> affine_terms(std::span<const Observation> obs,
                                 const CameraIntrinsics& intr) {
  std::vector<Affine> t;
  t.reserve(obs.size());
  for (const Observation& o : obs) {
    const double gx = (o.pixel.u - intr.u0) * intr.s_x / intr.f;
    const double gy = (o.pixel.v - intr.v0) * intr.s_y / intr.f;
    t.push_back({o.led.x + gx * o.led.z, gx, o.led.y + gy * o.led.z, gy});
  }
  return t;
}

struct Quadratic {
  // D(z) = var_g*z^2 - 2*cov*z + var_a
  double var_g = 0.0, cov = 0.0, var_a = 0.0;

  double at(double z) const { return var_g * z * z - 2.0 * cov * z + var_a; }
};

Quadratic distortion_quadratic(const std::vector<Affine>& t) {
  const double n = static_cast<double>(t.size());
  double max_ = 0, may = 0, mgx = 0, mgy = 0;
  for (const Affine& a : t) {
    max_ += a.ax;
    may += a.ay;
    mgx += a.gx;
    mgy += a.gy;
  }
  max_ /= n; may /= n; mgx /= n; mgy /= n;
  Quadratic q;
  for (const Affine& a : t) {
    q.var_a += (a.ax - max_) * (a.ax - max_) + (a.ay - may) * (a.ay - may);
    q.var_g += (a.gx - mgx) * (a.gx - mgx) + (a.gy - mgy) * (a.gy - mgy);
    q.cov += (a.ax - max_) * (a.gx - mgx) + (a.ay - may) * (a.gy - mgy);
  }
  q.var_a /= n; q.var_g /= n; q.cov /= n;
  return q;
}

}  // namespace

std::vector<Observation> synthesize_observations(std::span<const WorldPoint> leds,
                                                 const CameraPose& pose,
                                                 const CameraIntrinsics& intr,
                                                 Quantization q) {
  if (pose.angles.theta_x != 0.0 || pose.angles.theta_y != 0.0 ||
      pose.angles.theta_z != 0.0)
    throw ConfigError("synthesize_observations: requires R = I");
  const std::vector<std::size_t> captured = captured_indices(leds, pose, intr);
  if (captured.empty())
    throw EmptyObservations("synthesize_observations: no captured LEDs");
  std::vector<Observation> obs;
  obs.reserve(captured.size());
  for (std::size_t i : captured)
    obs.push_back({leds[i], project_world_to_pixel(leds[i], pose, intr, q)});
  return obs;
}

std::pair<double, double> estimate_xy(std::span<const Observation> obs,
                                      double z_guess,
                                      const CameraIntrinsics& intr) {
  if (obs.empty()) throw EmptyObservations("estimate_xy: no observations");
  double sx = 0.0, sy = 0.0;
  for (const Observation& o : obs) {
    sx += o.led.x + (o.pixel.u - intr.u0) * intr.s_x * (o.led.z - z_guess) / intr.f;
    sy += o.led.y + (o.pixel.v - intr.v0) * intr.s_y * (o.led.z - z_guess) / intr.f;
  }
  const double n = static_cast<double>(obs.size());
  return {sx / n, sy / n};
}

double distortion_at(std::span<const Observation> obs, double z,
                     const CameraIntrinsics& intr) {
  if (obs.empty()) throw EmptyObservations("distortion_at: no observations");
  const auto [xh, yh] = estimate_xy(obs, z, intr);
  double d = 0.0;
  for (const Observation& o : obs) {
    const double xi =
        o.led.x + (o.pixel.u - intr.u0) * intr.s_x * (o.led.z - z) / intr.f;
    const double yi =
        o.led.y + (o.pixel.v - intr.v0) * intr.s_y * (o.led.z - z) / intr.f;
    d += (xi - xh) * (xi - xh) + (yi - yh) * (yi - yh);
  }
  return d / static_cast<double>(obs.size());
}

PositionEstimate estimate_position(std::span<const Observation> obs,
                                   const ZSearch& grid,
                                   const CameraIntrinsics& intr) {
  if (obs.empty()) throw EmptyObservations("estimate_position: no observations");
  if (grid.step <= 0.0 || grid.z_max < grid.z_min)
    throw InvalidGrid("estimate_position: bad z grid");

  const std::vector<Affine> terms = affine_terms(obs, intr);
  const Quadratic q = distortion_quadratic(terms);

  PositionEstimate est;
  double z_hat = grid.z_min;
  if (obs.size() == 1 || q.var_g <= 0.0) {
    // D is constant in z (identically zero for one LED); every grid point
    // ties, so the smallest z wins.
    est.underdetermined = obs.size() == 1;
  } else {
    const double vertex = std::clamp(q.cov / q.var_g, grid.z_min, grid.z_max);
    const double steps = (vertex - grid.z_min) / grid.step;
    const double z_lo = grid.z_min + std::floor(steps) * grid.step;
    const double z_hi = std::min(grid.z_min + std::ceil(steps) * grid.step, grid.z_max);
    z_hat = q.at(z_lo) <= q.at(z_hi) ? z_lo : z_hi;
  }
  const auto [xh, yh] = estimate_xy(obs, z_hat, intr);
  est.x = xh;
  est.y = yh;
  est.z = z_hat;
  est.distortion = std::max(q.at(z_hat), 0.0);
  return est;
}

double position_error(const PositionEstimate& est, const WorldPoint& truth) {
  const double dx = est.x - truth.x;
  const double dy = est.y - truth.y;
  const double dz = est.z - truth.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ErrorExperiment run_error_experiment(const LedLayout& layout,
                                     std::span<const WorldPoint> receiver_xy,
                                     std::span<const double> heights,
                                     std::span<const double> pixel_scales,
                                     const CameraIntrinsics& intr,
                                     const ZSearch& grid, Quantization q,
                                     Exec exec) {
  if (receiver_xy.empty() || heights.empty() || pixel_scales.empty())
    throw ConfigError("run_error_experiment: empty input");

  ErrorExperiment exp;
  const std::size_t per_height = receiver_xy.size() * pixel_scales.size();
  exp.rows.assign(heights.size() * per_height, {});

  parallel_for(heights.size() * receiver_xy.size(), exec, [&](std::size_t idx) {
    const std::size_t hi = idx / receiver_xy.size();
    const std::size_t pi = idx % receiver_xy.size();
    const double h = heights[hi];
    const WorldPoint recv{receiver_xy[pi].x, receiver_xy[pi].y, h};
    const CameraPose pose{recv, {}};
    const std::vector<std::size_t> captured =
        captured_indices(layout.leds, pose, intr);
    for (std::size_t si = 0; si < pixel_scales.size(); ++si) {
      ErrorSample& row =
          exp.rows[hi * per_height + pi * pixel_scales.size() + si];
      row = {recv.x, recv.y, h, pixel_scales[si], captured.size(), 0.0};
      if (captured.empty()) continue;
      const CameraIntrinsics scaled = intr.scaled_pixels(pixel_scales[si]);
      std::vector<Observation> obs;
      obs.reserve(captured.size());
      for (std::size_t k : captured)
        obs.push_back({layout.leds[k],
                       project_world_to_pixel(layout.leds[k], pose, scaled, q)});
      const PositionEstimate est = estimate_position(obs, grid, scaled);
      row.error_m = position_error(est, recv);
    }
  });

  // Aggregate mean error per capture count, tracking how many distinct
  // receiver points back each bin.
  exp.bins.resize(heights.size());
  for (std::size_t hi = 0; hi < heights.size(); ++hi) {
    std::map<std::size_t, ErrorBin> bins;
    std::map<std::size_t, std::size_t> points_seen;
    for (std::size_t pi = 0; pi < receiver_xy.size(); ++pi) {
      const std::size_t nc =
          exp.rows[hi * per_height + pi * pixel_scales.size()].n_captured;
      if (nc == 0) continue;
      ++points_seen[nc];
      for (std::size_t si = 0; si < pixel_scales.size(); ++si) {
        const ErrorSample& row =
            exp.rows[hi * per_height + pi * pixel_scales.size() + si];
        ErrorBin& b = bins[nc];
        b.n_captured = nc;
        b.mean_error += row.error_m;
        ++b.samples;
      }
    }
    for (auto& [nc, b] : bins) {
      b.mean_error /= static_cast<double>(b.samples);
      b.receiver_points = points_seen[nc];
      exp.bins[hi].push_back(b);
    }
  }
  return exp;
}

}  // namespace vlp
