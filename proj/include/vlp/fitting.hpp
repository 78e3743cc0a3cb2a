#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vlp/errors.hpp"

namespace vlp {

enum class FitModel { Inverse, InverseOffset };

struct FitResult {
  FitModel model = FitModel::Inverse;
  double k = 0.0;
  double c = 0.0;
  double r_square = 0.0;  // may be negative for pathological data
  double rmse = 0.0;
  std::size_t n_points = 0;

  double evaluate(double x) const { return k / x + c; }
};

using XY = std::pair<double, double>;

// Least squares for y = k/x. Closed form on the transformed regressor
// u = 1/x; R^2 and RMSE are computed against the raw y values.
FitResult fit_inverse(std::span<const XY> points);

// Least squares for y = k/x + c via the 2x2 normal equations.
FitResult fit_inverse_offset(std::span<const XY> points);

// Arithmetic mean of values sharing a key; keys returned in ascending order.
std::vector<std::pair<double, double>> aggregate_mean(std::span<const XY> keyed);

}  // namespace vlp
