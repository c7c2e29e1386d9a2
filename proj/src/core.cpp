#include "elastic/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace elastic {

namespace {

constexpr double kEndpointTolerance = 1e-9;
constexpr double kQueryTolerance = 1e-12;
constexpr double kNodeSnap = 1e-9;

void require_all_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " contains a non-finite value");
  }
}

void require_grid_length(std::size_t length, const TimeGrid& grid, const char* what) {
  if (length != grid.size()) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(grid.size()) +
                         " samples, got " + std::to_string(length));
  }
}

}  // namespace

TimeGrid::TimeGrid(std::size_t n) {
  if (n < 3) throw ParameterError("TimeGrid needs at least 3 points, got " + std::to_string(n));
  points_.resize(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) points_[i] = static_cast<double>(i) / denom;
  points_.back() = 1.0;
}

Trajectory::Trajectory(TimeGrid grid, std::vector<double> values, TrajectoryMeta meta)
    : grid_(std::move(grid)), values_(std::move(values)), meta_(std::move(meta)) {
  require_grid_length(values_.size(), grid_, "Trajectory");
  require_all_finite(values_, "Trajectory");
}

Trajectory Trajectory::with_values(std::vector<double> values) const {
  return Trajectory(grid_, std::move(values), meta_);
}

SrvfCurve::SrvfCurve(TimeGrid grid, std::vector<double> q) : grid_(std::move(grid)), q_(std::move(q)) {
  require_grid_length(q_.size(), grid_, "SrvfCurve");
  require_all_finite(q_, "SrvfCurve");
}

Warping::Warping(TimeGrid grid, std::vector<double> gamma)
    : grid_(std::move(grid)), gamma_(std::move(gamma)) {
  require_grid_length(gamma_.size(), grid_, "Warping");
  require_all_finite(gamma_, "Warping");
  if (std::abs(gamma_.front()) > kEndpointTolerance || std::abs(gamma_.back() - 1.0) > kEndpointTolerance) {
    throw DomainError("Warping must map 0 to 0 and 1 to 1");
  }
  for (std::size_t i = 1; i < gamma_.size(); ++i) {
    if (gamma_[i] < gamma_[i - 1] - kQueryTolerance) {
      throw DomainError("Warping must be non-decreasing (violated at index " + std::to_string(i) + ")");
    }
  }
  gamma_.front() = 0.0;
  gamma_.back() = 1.0;
  double running = 0.0;
  for (double& g : gamma_) {
    g = std::clamp(g, running, 1.0);
    running = g;
  }
}

Warping Warping::identity(const TimeGrid& grid) {
  return Warping(grid, {grid.points().begin(), grid.points().end()});
}

std::vector<double> Warping::derivative() const {
  auto d = gradient(gamma_, grid_.spacing());
  for (double& v : d) v = std::max(v, 0.0);
  return d;
}

Warping Warping::inverse() const {
  const auto t = grid_.points();
  const std::size_t n = gamma_.size();
  std::vector<double> inv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto it = std::lower_bound(gamma_.begin(), gamma_.end(), t[k]);
    const auto idx = static_cast<std::size_t>(it - gamma_.begin());
    if (idx == 0) {
      inv[k] = 0.0;
    } else if (idx >= n) {
      inv[k] = 1.0;
    } else {
      const double lo = gamma_[idx - 1];
      const double hi = gamma_[idx];
      const double frac = (t[k] - lo) / (hi - lo);
      inv[k] = t[idx - 1] + frac * (t[idx] - t[idx - 1]);
    }
  }
  inv.front() = 0.0;
  inv.back() = 1.0;
  return Warping(grid_, std::move(inv));
}

Warping Warping::compose(const Warping& inner) const {
  if (!(inner.grid_ == grid_)) throw DimensionError("Warping::compose: grid mismatch");
  return Warping(grid_, interp_uniform(gamma_, inner.gamma_));
}

DistanceTriple::DistanceTriple(double amplitude_, double phase_, double cosine_)
    : amplitude(amplitude_), phase(phase_), cosine(cosine_) {
  constexpr double slack = 1e-9;
  if (!std::isfinite(amplitude) || !std::isfinite(phase) || !std::isfinite(cosine)) {
    throw DomainError("DistanceTriple: non-finite component");
  }
  if (amplitude < 0.0) throw DomainError("DistanceTriple: negative amplitude distance");
  if (phase < -slack || phase > std::numbers::pi / 2 + slack) {
    throw DomainError("DistanceTriple: phase distance outside [0, pi/2]");
  }
  if (cosine < -slack || cosine > 2.0 + slack) {
    throw DomainError("DistanceTriple: cosine distance outside [0, 2]");
  }
}

double inner_product(std::span<const double> f, std::span<const double> g, const TimeGrid& grid) {
  require_grid_length(f.size(), grid, "inner_product(f)");
  require_grid_length(g.size(), grid, "inner_product(g)");
  const std::size_t n = f.size();
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) interior += f[i] * g[i];
  const double ends = 0.5 * (f.front() * g.front() + f.back() * g.back());
  return grid.spacing() * (interior + ends);
}

double l2_norm(std::span<const double> f, const TimeGrid& grid) {
  return std::sqrt(std::max(0.0, inner_product(f, f, grid)));
}

double l2_distance(std::span<const double> f, std::span<const double> g, const TimeGrid& grid) {
  require_grid_length(f.size(), grid, "l2_distance(f)");
  require_grid_length(g.size(), grid, "l2_distance(g)");
  std::vector<double> diff(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) diff[i] = f[i] - g[i];
  return l2_norm(diff, grid);
}

std::vector<double> interp_uniform(std::span<const double> values, std::span<const double> at) {
  const std::size_t n = values.size();
  if (n < 2) throw InsufficientDataError("interpolation needs at least 2 samples");
  const double scale = static_cast<double>(n - 1);
  std::vector<double> out(at.size());
  for (std::size_t k = 0; k < at.size(); ++k) {
    double x = at[k];
    if (!(x >= -kQueryTolerance && x <= 1.0 + kQueryTolerance)) {
      throw DomainError("interpolation query " + std::to_string(x) + " outside [0, 1]");
    }
    x = std::clamp(x, 0.0, 1.0);
    const double pos = x * scale;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < kNodeSnap) {
      out[k] = values[static_cast<std::size_t>(nearest)];
      continue;
    }
    const auto i = std::min(static_cast<std::size_t>(pos), n - 2);
    const double frac = pos - static_cast<double>(i);
    out[k] = values[i] + frac * (values[i + 1] - values[i]);
  }
  return out;
}

std::vector<double> interp_linear(const Trajectory& traj, std::span<const double> at) {
  return interp_uniform(traj.values(), at);
}

std::vector<double> gradient(std::span<const double> values, double h) {
  const std::size_t n = values.size();
  if (n < 3) throw InsufficientDataError("gradient needs at least 3 samples");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> cumulative_trapezoid(std::span<const double> values, double h) {
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 1; i < values.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
  }
  return out;
}

}  // namespace elastic
