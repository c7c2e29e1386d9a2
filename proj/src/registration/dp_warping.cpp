#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "elastic/registration.hpp"

namespace elastic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Candidates closer than this (relative) count as tied.
constexpr double kTieTolerance = 1e-12;

std::size_t diagonal_offset(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::vector<LatticePoint> lattice_steps(int max_slope) {
  if (max_slope < 1) throw ParameterError("max_slope must be >= 1, got " + std::to_string(max_slope));
  std::vector<LatticePoint> steps;
  for (int di = 1; di <= max_slope; ++di) {
    for (int dj = 1; dj <= max_slope; ++dj) {
      if (std::gcd(di, dj) == 1) steps.emplace_back(di, dj);
    }
  }
  return steps;
}

double segment_cost(std::span<const double> q_ref, std::span<const double> q_mov, LatticePoint from,
                    LatticePoint to) {
  const auto [k, l] = from;
  const auto [i, j] = to;
  const std::size_t di = i - k;
  const std::size_t dj = j - l;
  const double root_slope = std::sqrt(static_cast<double>(dj) / static_cast<double>(di));
  const double h = 1.0 / static_cast<double>(q_ref.size() - 1);

  double sum = 0.0;
  for (std::size_t p = 0; p <= di; ++p) {
    // Moving-axis position l + dj*p/di, split exactly into node and fraction.
    const std::size_t num = dj * p;
    const std::size_t node = l + num / di;
    const std::size_t rem = num % di;
    double moved = q_mov[node];
    if (rem != 0) {
      moved += static_cast<double>(rem) / static_cast<double>(di) * (q_mov[node + 1] - q_mov[node]);
    }
    const double e = q_ref[k + p] - root_slope * moved;
    sum += (p == 0 || p == di) ? 0.5 * e * e : e * e;
  }
  return h * sum;
}

WarpSearch dp_warp_search(const SrvfCurve& q_ref, const SrvfCurve& q_mov, int max_slope) {
  if (!(q_ref.grid() == q_mov.grid())) throw DimensionError("optimal_warping: grid mismatch");
  const std::vector<LatticePoint> steps = lattice_steps(max_slope);
  const std::size_t n = q_ref.size();
  const auto ref = q_ref.q();
  const auto mov = q_mov.q();

  std::vector<double> cost(n * n, kInf);
  std::vector<int> choice(n * n, -1);
  cost[0] = 0.0;

  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      double best = kInf;
      int best_step = -1;
      for (std::size_t s = 0; s < steps.size(); ++s) {
        const auto [di, dj] = steps[s];
        if (di > i || dj > j) continue;
        const std::size_t k = i - di;
        const std::size_t l = j - dj;
        const double base = cost[k * n + l];
        if (base == kInf) continue;
        const double candidate = base + segment_cost(ref, mov, {k, l}, {i, j});
        const double tol = kTieTolerance * std::max(1.0, std::abs(best == kInf ? candidate : best));
        if (candidate < best - tol) {
          best = candidate;
          best_step = static_cast<int>(s);
        } else if (candidate <= best + tol && best_step >= 0) {
          const auto [bi, bj] = steps[static_cast<std::size_t>(best_step)];
          const auto step_key = diagonal_offset(di, dj);
          const auto best_key = diagonal_offset(bi, bj);
          const bool closer = step_key < best_key ||
                              (step_key == best_key && diagonal_offset(k, l) < diagonal_offset(i - bi, j - bj));
          if (closer) {
            best = std::min(best, candidate);
            best_step = static_cast<int>(s);
          }
        }
      }
      cost[i * n + j] = best;
      choice[i * n + j] = best_step;
    }
  }

  std::vector<LatticePoint> path{{n - 1, n - 1}};
  while (path.back() != LatticePoint{0, 0}) {
    const auto [i, j] = path.back();
    const auto [di, dj] = steps[static_cast<std::size_t>(choice[i * n + j])];
    path.emplace_back(i - di, j - dj);
  }
  std::reverse(path.begin(), path.end());

  const double h = q_ref.grid().spacing();
  std::vector<double> gamma(n);
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const auto [k, l] = path[seg];
    const auto [i, j] = path[seg + 1];
    const double slope = static_cast<double>(j - l) / static_cast<double>(i - k);
    for (std::size_t p = k; p <= i; ++p) gamma[p] = h * (static_cast<double>(l) + slope * static_cast<double>(p - k));
  }
  gamma.back() = 1.0;

  return WarpSearch{Warping(q_ref.grid(), std::move(gamma)), std::move(path), cost[n * n - 1]};
}

Warping optimal_warping(const SrvfCurve& q_ref, const SrvfCurve& q_mov, int max_slope) {
  WarpSearch search = dp_warp_search(q_ref, q_mov, max_slope);
  const TimeGrid& grid = q_ref.grid();
  const double warped = l2_distance(q_ref.q(), group_action(q_mov, search.warp).q(), grid);
  const double unwarped = l2_distance(q_ref.q(), q_mov.q(), grid);
  if (warped > unwarped) return Warping::identity(grid);
  return std::move(search.warp);
}

}  // namespace elastic
