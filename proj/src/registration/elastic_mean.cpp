#include <algorithm>
#include <cmath>
#include <limits>

#include "elastic/parallel.hpp"
#include "elastic/registration.hpp"

namespace elastic {

namespace {

void require_common_grid(std::span<const Trajectory> curves, const TimeGrid& grid) {
  for (const Trajectory& c : curves) {
    if (!(c.grid() == grid)) throw DimensionError("registration: curves must share one grid");
  }
}

std::vector<SrvfCurve> srvfs_of(std::span<const Trajectory> curves) {
  std::vector<SrvfCurve> qs;
  qs.reserve(curves.size());
  for (const Trajectory& c : curves) qs.push_back(to_srvf(c));
  return qs;
}

/// Index of the SRVF with the smallest summed L2 distance to all others.
std::size_t medoid(std::span<const SrvfCurve> qs) {
  const std::size_t m = qs.size();
  std::vector<double> total(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const double d = l2_distance(qs[a].q(), qs[b].q(), qs[a].grid());
      total[a] += d;
      total[b] += d;
    }
  }
  return static_cast<std::size_t>(std::min_element(total.begin(), total.end()) - total.begin());
}

std::vector<double> normalized(std::vector<double> v, const TimeGrid& grid) {
  const double norm = l2_norm(v, grid);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

}  // namespace

Warping karcher_mean_warp(std::span<const Warping> warps, int max_iter, double tol) {
  if (warps.empty()) throw EmptyInputError("karcher_mean_warp: no warps");
  const TimeGrid& grid = warps.front().grid();
  const std::size_t n = grid.size();
  const double m = static_cast<double>(warps.size());

  std::vector<std::vector<double>> psi;
  psi.reserve(warps.size());
  for (const Warping& w : warps) {
    if (!(w.grid() == grid)) throw DimensionError("karcher_mean_warp: grid mismatch");
    std::vector<double> root = w.derivative();
    for (double& v : root) v = std::sqrt(v);
    psi.push_back(normalized(std::move(root), grid));
  }

  std::vector<double> mu(n, 0.0);
  for (const auto& p : psi) {
    for (std::size_t i = 0; i < n; ++i) mu[i] += p[i] / m;
  }
  mu = normalized(std::move(mu), grid);

  // Gradient descent on the unit sphere: average the log maps, step along the exp map.
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<double> shoot(n, 0.0);
    for (const auto& p : psi) {
      const double theta = std::acos(std::clamp(inner_product(mu, p, grid), -1.0, 1.0));
      if (theta < 1e-12) continue;
      const double scale = theta / std::sin(theta);
      for (std::size_t i = 0; i < n; ++i) shoot[i] += scale * (p[i] - std::cos(theta) * mu[i]) / m;
    }
    const double step = l2_norm(shoot, grid);
    if (step < tol) break;
    for (std::size_t i = 0; i < n; ++i) mu[i] = std::cos(step) * mu[i] + std::sin(step) * shoot[i] / step;
    mu = normalized(std::move(mu), grid);
  }

  for (double& v : mu) v *= v;
  std::vector<double> gamma = cumulative_trapezoid(mu, grid.spacing());
  const double total = gamma.back();
  for (double& g : gamma) g /= total;
  return Warping(grid, std::move(gamma));
}

RegistrationResult phase_amplitude_separation(std::span<const Trajectory> curves,
                                              const ElasticMeanOptions& options) {
  if (curves.empty()) throw EmptyInputError("phase_amplitude_separation: no curves");
  if (options.max_iter < 1) throw ParameterError("phase_amplitude_separation: max_iter must be >= 1");
  if (!(options.tol >= 0.0)) throw ParameterError("phase_amplitude_separation: tol must be >= 0");
  const TimeGrid& grid = curves.front().grid();
  require_common_grid(curves, grid);

  const std::size_t m = curves.size();
  const std::vector<SrvfCurve> qs = srvfs_of(curves);
  SrvfCurve mean_q = qs[medoid(qs)];

  std::vector<Warping> warps(m, Warping::identity(grid));
  std::vector<SrvfCurve> aligned_q(qs);
  std::vector<double> residual(m, 0.0);
  double previous_energy = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    iterations = iter;
    parallel_for(m, [&](std::size_t i) {
      warps[i] = optimal_warping(mean_q, qs[i], options.max_slope);
      aligned_q[i] = group_action(qs[i], warps[i]);
      const double d = l2_distance(mean_q.q(), aligned_q[i].q(), grid);
      residual[i] = d * d;
    });

    double energy = 0.0;
    for (double r : residual) energy += r;

    std::vector<double> average(grid.size(), 0.0);
    for (const SrvfCurve& a : aligned_q) {
      for (std::size_t k = 0; k < average.size(); ++k) average[k] += a[k] / static_cast<double>(m);
    }
    mean_q = SrvfCurve(grid, std::move(average));

    if (energy == 0.0 ||
        (iter > 1 && std::abs(energy - previous_energy) <= options.tol * previous_energy)) {
      converged = true;
      break;
    }
    previous_energy = energy;
  }

  // Center so the warps' Karcher mean is the identity.
  const Warping center_inverse = karcher_mean_warp(warps).inverse();
  for (Warping& w : warps) w = w.compose(center_inverse);
  mean_q = group_action(mean_q, center_inverse);

  std::vector<Trajectory> aligned;
  aligned.reserve(m);
  double start = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    aligned.push_back(compose(curves[i], warps[i]));
    start += curves[i][0] / static_cast<double>(m);
  }

  Trajectory mean = from_srvf(mean_q, start);
  return RegistrationResult{std::move(mean), std::move(mean_q), std::move(warps), std::move(aligned), iterations,
                            converged};
}

RegistrationResult align_to_reference(std::span<const Trajectory> curves, const Trajectory& reference,
                                      int max_slope) {
  if (curves.empty()) throw EmptyInputError("align_to_reference: no curves");
  require_common_grid(curves, reference.grid());

  const SrvfCurve q_ref = to_srvf(reference);
  const std::size_t m = curves.size();
  std::vector<Warping> warps(m, Warping::identity(reference.grid()));
  std::vector<Trajectory> aligned(curves.begin(), curves.end());
  parallel_for(m, [&](std::size_t i) {
    warps[i] = optimal_warping(q_ref, to_srvf(curves[i]), max_slope);
    aligned[i] = compose(curves[i], warps[i]);
  });
  return RegistrationResult{reference, q_ref, std::move(warps), std::move(aligned), 1, true};
}

}  // namespace elastic
