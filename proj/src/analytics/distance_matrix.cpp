#include <algorithm>
#include <cmath>

#include "elastic/analytics.hpp"
#include "elastic/parallel.hpp"

namespace elastic {

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::amplitude:
      return "amplitude";
    case Metric::phase:
      return "phase";
    case Metric::cosine:
      return "cosine";
  }
  return "unknown";
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, std::vector<double> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
  const std::size_t m = labels_.size();
  if (values_.size() != m * m) throw DimensionError("DistanceMatrix: values must be m*m");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = values_[i * m + j];
      if (!std::isfinite(v) || v < 0.0) throw DomainError("DistanceMatrix: entries must be finite and >= 0");
      if (i == j && std::abs(v) > 1e-9) throw DomainError("DistanceMatrix: nonzero diagonal");
      if (v != values_[j * m + i]) throw DomainError("DistanceMatrix: not symmetric");
    }
  }
}

namespace {

/// Directed distance from `to` (reference) to `from`, optionally aligning `from` first.
double directed_distance(const Trajectory& reference, const SrvfCurve& q_reference, const Trajectory& other,
                         const SrvfCurve& q_other, Metric metric, bool registered, int max_slope) {
  const TimeGrid& grid = reference.grid();
  if (!registered) {
    if (metric == Metric::amplitude) return l2_distance(q_reference.q(), q_other.q(), grid);
    return cosine_distance(reference, other);
  }
  const Warping w = optimal_warping(q_reference, q_other, max_slope);
  switch (metric) {
    case Metric::amplitude:
      return l2_distance(q_reference.q(), group_action(q_other, w).q(), grid);
    case Metric::phase:
      return phase_distance(w);
    case Metric::cosine:
      return cosine_distance(reference, compose(other, w));
  }
  return 0.0;
}

}  // namespace

DistanceMatrix pairwise_matrix(std::span<const Trajectory> curves, Metric metric, bool registered,
                               int max_slope) {
  if (curves.size() < 2) throw InsufficientDataError("pairwise_matrix: need at least 2 curves");
  if (metric == Metric::phase && !registered) {
    throw InvalidCombinationError("pairwise_matrix: the phase metric requires registration");
  }
  const TimeGrid& grid = curves.front().grid();
  for (const Trajectory& c : curves) {
    if (!(c.grid() == grid)) throw DimensionError("pairwise_matrix: curves must share one grid");
  }

  const std::size_t m = curves.size();
  std::vector<SrvfCurve> qs;
  qs.reserve(m);
  for (const Trajectory& c : curves) qs.push_back(to_srvf(c));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  }

  std::vector<double> values(m * m, 0.0);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const double ij = directed_distance(curves[i], qs[i], curves[j], qs[j], metric, registered, max_slope);
    const double ji = directed_distance(curves[j], qs[j], curves[i], qs[i], metric, registered, max_slope);
    const double sym = std::max(0.0, 0.5 * (ij + ji));
    values[i * m + j] = sym;
    values[j * m + i] = sym;
  });

  std::vector<std::string> labels;
  labels.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& id = curves[i].meta().participant_id;
    labels.push_back(id.empty() ? std::to_string(i) : id);
  }
  return DistanceMatrix(std::move(labels), std::move(values));
}

}  // namespace elastic
