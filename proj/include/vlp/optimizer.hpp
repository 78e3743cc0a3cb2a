#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vlp/layout.hpp"
#include "vlp/parallel.hpp"

namespace vlp {

// Symmetric non-uniform M x N rectangular layout: M+1 row spacings and N+1
// column spacings with the mirror constraints d[i] = d[M+2-i] (1-indexed);
// spacings sum to the room length/width.
struct SymmetricRectangularLayout {
  int rows = 0;
  int cols = 0;
  std::vector<double> d_r;  // size rows + 1
  std::vector<double> d_c;  // size cols + 1

  LedLayout to_layout(double led_height) const;
  bool symmetric(double tol = 0.0) const;
};

SymmetricRectangularLayout uniform_rectangular(int rows, int cols,
                                               const RoomSpec& room);

struct ObjectiveReport {
  double mean_inverse_count = 0.0;  // the optimization objective
  double mean_npem = 0.0;           // over receivers with a rank-3 metric
  std::size_t receivers = 0;
  std::size_t rank_deficient = 0;   // receivers excluded from mean_npem
  std::vector<std::size_t> counts;  // n_c per receiver
};

inline constexpr double kZeroCapturePenalty = 10.0;

// Mean of 1/n_c over the receivers (zero-capture receivers contribute the
// penalty value) plus the true mean NPEM for reporting. `beta` feeds the
// NPEM evaluation only.
ObjectiveReport evaluate_objective(std::span<const WorldPoint> leds,
                                   std::span<const WorldPoint> receivers,
                                   const CameraIntrinsics& intr, double beta);

struct RectSearch {
  double d_min = 0.1;
  double step = 0.05;
};

// Coordinate descent over the free symmetric spacing parameters: repeatedly
// transfers step multiples between free spacings (sum preserved through the
// mirror weights) while the objective improves. Never returns a layout worse
// than the uniform initialization.
std::pair<SymmetricRectangularLayout, ObjectiveReport> optimize_rectangular(
    int rows, int cols, const RoomSpec& room,
    std::span<const WorldPoint> receivers, const CameraIntrinsics& intr,
    double beta, const RectSearch& search);

struct GaConfig {
  std::size_t population = 5071;
  std::size_t iterations = 10;
  double selection_rate = 0.5;
  double crossover_rate = 0.7;
  double mutation_rate = 0.001;
  bool elitism = true;
  std::uint64_t seed = 1;
};

struct GaGeneration {
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct GaResult {
  LedLayout layout;
  ObjectiveReport report;
  std::vector<GaGeneration> history;  // iterations + 1 entries
};

// Real-coded GA over the free LED (x, y) coordinates; fitness = 1/objective.
// Selection keeps the top selection_rate fraction; with elitism they carry
// over unchanged, so best fitness is non-decreasing. Deterministic for a
// fixed seed regardless of thread count.
GaResult optimize_ga(std::size_t n_leds, const RoomSpec& room,
                     std::span<const WorldPoint> receivers,
                     const CameraIntrinsics& intr, double beta,
                     const GaConfig& cfg, Exec exec = Exec::Parallel);

}  // namespace vlp
