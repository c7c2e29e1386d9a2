#include <algorithm>
#include <cmath>
#include <numbers>

#include "elastic/preprocess.hpp"
#include "elastic/registration.hpp"

namespace elastic {

SrvfCurve to_srvf(const Trajectory& traj) {
  const Trajectory velocity = derivative(traj);
  std::vector<double> q(velocity.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double v = velocity[i];
    q[i] = v == 0.0 ? 0.0 : std::copysign(std::sqrt(std::abs(v)), v);
  }
  return SrvfCurve(traj.grid(), std::move(q));
}

Trajectory from_srvf(const SrvfCurve& q, double beta0, TrajectoryMeta meta) {
  std::vector<double> velocity(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) velocity[i] = q[i] * std::abs(q[i]);
  std::vector<double> beta = cumulative_trapezoid(velocity, q.grid().spacing());
  for (double& b : beta) b += beta0;
  return Trajectory(q.grid(), std::move(beta), std::move(meta));
}

SrvfCurve group_action(const SrvfCurve& q, const Warping& w) {
  if (!(q.grid() == w.grid())) throw DimensionError("group_action: grid mismatch");
  std::vector<double> out = interp_uniform(q.q(), w.gamma());
  const std::vector<double> rate = w.derivative();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::sqrt(rate[i]);
  return SrvfCurve(q.grid(), std::move(out));
}

Trajectory compose(const Trajectory& traj, const Warping& w) {
  if (!(traj.grid() == w.grid())) throw DimensionError("compose: grid mismatch");
  return traj.with_values(interp_uniform(traj.values(), w.gamma()));
}

double amplitude_distance(const Trajectory& b1, const Trajectory& b2, int max_slope) {
  const SrvfCurve q1 = to_srvf(b1);
  const SrvfCurve q2 = to_srvf(b2);
  const Warping w = optimal_warping(q1, q2, max_slope);
  return l2_distance(q1.q(), group_action(q2, w).q(), q1.grid());
}

double phase_distance(const Warping& w) {
  std::vector<double> psi = w.derivative();
  for (double& v : psi) v = std::sqrt(v);
  const std::vector<double> ones(psi.size(), 1.0);
  const double c = std::clamp(inner_product(ones, psi, w.grid()), -1.0, 1.0);
  return std::clamp(std::acos(c), 0.0, std::numbers::pi / 2);
}

double cosine_distance(std::span<const double> b1, std::span<const double> b2, const TimeGrid& grid) {
  const double n1 = l2_norm(b1, grid);
  const double n2 = l2_norm(b2, grid);
  if (n1 == 0.0 || n2 == 0.0) throw DegenerateInputError("cosine_distance: zero-norm input");
  return std::clamp(1.0 - inner_product(b1, b2, grid) / (n1 * n2), 0.0, 2.0);
}

double cosine_distance(const Trajectory& b1, const Trajectory& b2) {
  if (!(b1.grid() == b2.grid())) throw DimensionError("cosine_distance: grid mismatch");
  return cosine_distance(b1.values(), b2.values(), b1.grid());
}

}  // namespace elastic
