#include "vlp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vlp/npem.hpp"

namespace vlp {

LedLayout SymmetricRectangularLayout::to_layout(double led_height) const {
  LedLayout layout{CellKind::RectangularNonUniform,
                   0.0,
                   {}};
  std::vector<double> xs(cols), ys(rows);
  double acc = 0.0;
  for (int j = 0; j < cols; ++j) {
    acc += d_c[j];
    xs[j] = acc;
  }
  acc = 0.0;
  for (int i = 0; i < rows; ++i) {
    acc += d_r[i];
    ys[i] = acc;
  }
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) layout.leds.push_back({xs[j], ys[i], led_height});
  const double width = std::accumulate(d_c.begin(), d_c.end(), 0.0);
  const double length = std::accumulate(d_r.begin(), d_r.end(), 0.0);
  layout.density = static_cast<double>(rows * cols) / (width * length);
  return layout;
}

bool SymmetricRectangularLayout::symmetric(double tol) const {
  for (std::size_t i = 0; i < d_r.size(); ++i)
    if (std::abs(d_r[i] - d_r[d_r.size() - 1 - i]) > tol) return false;
  for (std::size_t j = 0; j < d_c.size(); ++j)
    if (std::abs(d_c[j] - d_c[d_c.size() - 1 - j]) > tol) return false;
  return true;
}

SymmetricRectangularLayout uniform_rectangular(int rows, int cols,
                                               const RoomSpec& room) {
  // Interior spacings of room/rows, half-spacing margins at the walls.
  SymmetricRectangularLayout s;
  s.rows = rows;
  s.cols = cols;
  const double ar = room.length / rows;
  const double ac = room.width / cols;
  s.d_r.assign(rows + 1, ar);
  s.d_r.front() = s.d_r.back() = ar / 2.0;
  s.d_c.assign(cols + 1, ac);
  s.d_c.front() = s.d_c.back() = ac / 2.0;
  return s;
}

namespace {

double mean_inverse_count(std::span<const WorldPoint> leds,
                          std::span<const WorldPoint> receivers,
                          const CameraIntrinsics& intr,
                          std::vector<std::size_t>* counts_out = nullptr) {
  double total = 0.0;
  if (counts_out) counts_out->clear();
  for (const WorldPoint& r : receivers) {
    const CameraPose pose{r, {}};
    const std::size_t nc = captured_indices(leds, pose, intr).size();
    if (counts_out) counts_out->push_back(nc);
    total += nc == 0 ? kZeroCapturePenalty : 1.0 / static_cast<double>(nc);
  }
  return total / static_cast<double>(receivers.size());
}

}  // namespace

ObjectiveReport evaluate_objective(std::span<const WorldPoint> leds,
                                   std::span<const WorldPoint> receivers,
                                   const CameraIntrinsics& intr, double beta) {
  if (receivers.empty()) throw ConfigError("evaluate_objective: no receivers");
  ObjectiveReport rep;
  rep.receivers = receivers.size();
  rep.mean_inverse_count = mean_inverse_count(leds, receivers, intr, &rep.counts);
  double npem_sum = 0.0;
  std::size_t npem_n = 0;
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    if (rep.counts[i] == 0) {
      ++rep.rank_deficient;
      continue;
    }
    const CameraPose pose{receivers[i], {}};
    const std::vector<std::size_t> idx = captured_indices(leds, pose, intr);
    std::vector<WorldPoint> subset;
    subset.reserve(idx.size());
    for (std::size_t k : idx) subset.push_back(leds[k]);
    const NpemResult r = npem_full(jacobian_general(subset, pose, intr), beta);
    if (r.rank_deficient) {
      ++rep.rank_deficient;
      continue;
    }
    npem_sum += r.value;
    ++npem_n;
  }
  rep.mean_npem = npem_n > 0 ? npem_sum / static_cast<double>(npem_n) : 0.0;
  return rep;
}

namespace {

// Free spacing parameters under the mirror constraint, with weight 2 for
// mirrored pairs and 1 for the middle spacing when the count is odd.
struct FreeSpacings {
  std::vector<double> value;
  std::vector<double> weight;

  static FreeSpacings from(const std::vector<double>& d) {
    FreeSpacings f;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      f.value.push_back(d[i]);
      f.weight.push_back(i == n - 1 - i ? 1.0 : 2.0);
    }
    return f;
  }

  std::vector<double> expand(std::size_t n) const {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < value.size(); ++i) {
      d[i] = value[i];
      d[n - 1 - i] = value[i];
    }
    return d;
  }
};

}  // namespace

std::pair<SymmetricRectangularLayout, ObjectiveReport> optimize_rectangular(
    int rows, int cols, const RoomSpec& room,
    std::span<const WorldPoint> receivers, const CameraIntrinsics& intr,
    double beta, const RectSearch& search) {
  if (receivers.empty()) throw ConfigError("optimize_rectangular: no receivers");
  if ((rows + 1) * search.d_min > room.length + 1e-12 ||
      (cols + 1) * search.d_min > room.width + 1e-12)
    throw InfeasibleSpacing("optimize_rectangular: d_min does not fit the room");

  SymmetricRectangularLayout cur = uniform_rectangular(rows, cols, room);
  FreeSpacings fr = FreeSpacings::from(cur.d_r);
  FreeSpacings fc = FreeSpacings::from(cur.d_c);

  const auto objective_of = [&](const FreeSpacings& r, const FreeSpacings& c) {
    SymmetricRectangularLayout s = cur;
    s.d_r = r.expand(cur.d_r.size());
    s.d_c = c.expand(cur.d_c.size());
    const LedLayout l = s.to_layout(room.led_height);
    return mean_inverse_count(l.leds, receivers, intr);
  };

  double best = objective_of(fr, fc);
  const std::size_t t_max =
      static_cast<std::size_t>(std::ceil(std::max(room.width, room.length) / search.step));
  bool improved = true;
  while (improved) {
    improved = false;
    for (int axis = 0; axis < 2; ++axis) {
      FreeSpacings& f = axis == 0 ? fr : fc;
      for (std::size_t i = 0; i < f.value.size(); ++i) {
        for (std::size_t j = 0; j < f.value.size(); ++j) {
          if (i == j) continue;
          std::size_t t = 1;
          while (t <= t_max) {
            const double delta = static_cast<double>(t) * search.step;
            if (f.value[i] - delta < search.d_min - 1e-12) break;
            FreeSpacings cand = f;
            cand.value[i] -= delta;
            cand.value[j] += delta * f.weight[i] / f.weight[j];
            const double obj =
                axis == 0 ? objective_of(cand, fc) : objective_of(fr, cand);
            if (obj < best) {
              best = obj;
              f = cand;
              improved = true;
              t = 1;
            } else {
              ++t;
            }
          }
        }
      }
    }
  }

  cur.d_r = fr.expand(cur.d_r.size());
  cur.d_c = fc.expand(cur.d_c.size());
  const LedLayout final_layout = cur.to_layout(room.led_height);
  return {cur, evaluate_objective(final_layout.leds, receivers, intr, beta)};
}

GaResult optimize_ga(std::size_t n_leds, const RoomSpec& room,
                     std::span<const WorldPoint> receivers,
                     const CameraIntrinsics& intr, double beta,
                     const GaConfig& cfg, Exec exec) {
  if (cfg.population < 2) throw ConfigError("optimize_ga: population must be >= 2");
  if (cfg.selection_rate <= 0.0 || cfg.selection_rate > 1.0 ||
      cfg.crossover_rate < 0.0 || cfg.crossover_rate > 1.0 ||
      cfg.mutation_rate < 0.0 || cfg.mutation_rate > 1.0)
    throw ConfigError("optimize_ga: rates must lie in [0, 1]");
  if (receivers.empty()) throw ConfigError("optimize_ga: no receivers");

  const std::size_t genes = 2 * n_leds;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ux(0.0, room.width);
  std::uniform_real_distribution<double> uy(0.0, room.length);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<std::vector<double>> pop(cfg.population, std::vector<double>(genes));
  for (auto& chromo : pop)
    for (std::size_t g = 0; g < genes; g += 2) {
      chromo[g] = ux(rng);
      chromo[g + 1] = uy(rng);
    }

  const auto to_leds = [&](const std::vector<double>& chromo) {
    std::vector<WorldPoint> leds(n_leds);
    for (std::size_t g = 0; g < n_leds; ++g)
      leds[g] = {chromo[2 * g], chromo[2 * g + 1], room.led_height};
    return leds;
  };

  std::vector<double> fitness(cfg.population);
  const auto evaluate = [&]() {
    parallel_for(cfg.population, exec, [&](std::size_t i) {
      fitness[i] = 1.0 / mean_inverse_count(to_leds(pop[i]), receivers, intr);
    });
  };
  const auto ranking = [&]() {
    std::vector<std::size_t> order(cfg.population);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
    return order;
  };

  GaResult res;
  evaluate();
  for (std::size_t gen = 0; gen <= cfg.iterations; ++gen) {
    const std::vector<std::size_t> order = ranking();
    res.history.push_back(
        {fitness[order[0]],
         std::accumulate(fitness.begin(), fitness.end(), 0.0) /
             static_cast<double>(cfg.population)});
    if (gen == cfg.iterations) {
      res.layout.kind = CellKind::Free;
      res.layout.density =
          static_cast<double>(n_leds) / (room.width * room.length);
      res.layout.leds = to_leds(pop[order[0]]);
      res.report = evaluate_objective(res.layout.leds, receivers, intr, beta);
      return res;
    }

    const std::size_t n_keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(static_cast<double>(cfg.population) *
                                    cfg.selection_rate));
    std::vector<std::vector<double>> parents;
    parents.reserve(n_keep);
    for (std::size_t i = 0; i < n_keep; ++i) parents.push_back(pop[order[i]]);

    std::vector<std::vector<double>> next;
    next.reserve(cfg.population);
    if (cfg.elitism) next = parents;
    std::uniform_int_distribution<std::size_t> pick(0, n_keep - 1);
    while (next.size() < cfg.population) {
      const std::vector<double>& pa = parents[pick(rng)];
      const std::vector<double>& pb = parents[pick(rng)];
      std::vector<double> child = pa;
      if (coin(rng) < cfg.crossover_rate)
        for (std::size_t g = 0; g < genes; ++g)
          if (coin(rng) < 0.5) child[g] = pb[g];
      for (std::size_t g = 0; g < genes; ++g)
        if (coin(rng) < cfg.mutation_rate)
          child[g] = (g % 2 == 0) ? ux(rng) : uy(rng);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    evaluate();
  }
  return res;  // unreachable
}

}  // namespace vlp
