#include "vlp/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace vlp {

namespace {

void check_x_positive(std::span<const XY> points) {
  for (const XY& p : points)
    if (p.first <= 0.0) throw NonPositiveX("fit: x values must be > 0");
}

void finish(FitResult& fit, std::span<const XY> points) {
  double sse = 0.0, sst = 0.0, mean_y = 0.0;
  for (const XY& p : points) mean_y += p.second;
  mean_y /= static_cast<double>(points.size());
  for (const XY& p : points) {
    const double resid = p.second - fit.evaluate(p.first);
    sse += resid * resid;
    sst += (p.second - mean_y) * (p.second - mean_y);
  }
  fit.r_square = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : 0.0);
  fit.rmse = std::sqrt(sse / static_cast<double>(points.size()));
  fit.n_points = points.size();
}

}  // namespace

FitResult fit_inverse(std::span<const XY> points) {
  if (points.size() < 2) throw InsufficientData("fit_inverse: need >= 2 points");
  check_x_positive(points);
  double suu = 0.0, suy = 0.0;
  for (const XY& p : points) {
    const double u = 1.0 / p.first;
    suu += u * u;
    suy += u * p.second;
  }
  FitResult fit;
  fit.model = FitModel::Inverse;
  fit.k = suy / suu;
  fit.c = 0.0;
  finish(fit, points);
  return fit;
}

FitResult fit_inverse_offset(std::span<const XY> points) {
  if (points.size() < 3)
    throw InsufficientData("fit_inverse_offset: need >= 3 points");
  check_x_positive(points);
  double suu = 0.0, su = 0.0, suy = 0.0, sy = 0.0;
  const double n = static_cast<double>(points.size());
  for (const XY& p : points) {
    const double u = 1.0 / p.first;
    suu += u * u;
    su += u;
    suy += u * p.second;
    sy += p.second;
  }
  const double det = suu * n - su * su;
  // det = 0 iff all u are equal, i.e. all x equal.
  if (std::abs(det) <= 1e-14 * std::max(1.0, suu * n))
    throw SingularDesign("fit_inverse_offset: all x equal");
  FitResult fit;
  fit.model = FitModel::InverseOffset;
  fit.k = (suy * n - su * sy) / det;
  fit.c = (suu * sy - su * suy) / det;
  finish(fit, points);
  return fit;
}

std::vector<std::pair<double, double>> aggregate_mean(std::span<const XY> keyed) {
  if (keyed.empty()) throw InsufficientData("aggregate_mean: empty input");
  std::map<double, std::pair<double, std::size_t>> groups;
  for (const XY& p : keyed) {
    auto& g = groups[p.first];
    g.first += p.second;
    g.second += 1;
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(groups.size());
  for (const auto& [key, acc] : groups)
    out.emplace_back(key, acc.first / static_cast<double>(acc.second));
  return out;
}

}  // namespace vlp
