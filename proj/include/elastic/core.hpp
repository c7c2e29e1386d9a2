#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "elastic/errors.hpp"

namespace elastic {

/// Uniform grid of n points on the normalized time domain [0, 1].
class TimeGrid {
 public:
  static constexpr std::size_t kDefaultSize = 101;

  explicit TimeGrid(std::size_t n = kDefaultSize);

  std::size_t size() const { return points_.size(); }
  double spacing() const { return 1.0 / static_cast<double>(points_.size() - 1); }
  std::span<const double> points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.size() == b.size(); }

 private:
  std::vector<double> points_;
};

/// Optional descriptive labels carried alongside a trajectory. Empty means absent.
struct TrajectoryMeta {
  std::string participant_id;
  std::string cohort;
  std::string trial;
};

/// A scalar signal sampled on a TimeGrid.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, std::vector<double> values, TrajectoryMeta meta = {});

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const TrajectoryMeta& meta() const { return meta_; }

  /// Same meta, new samples on the same grid.
  Trajectory with_values(std::vector<double> values) const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
  TrajectoryMeta meta_;
};

/// Square-root velocity representation q(t) of a trajectory.
class SrvfCurve {
 public:
  SrvfCurve(TimeGrid grid, std::vector<double> q);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> q() const { return q_; }
  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }

 private:
  TimeGrid grid_;
  std::vector<double> q_;
};

/// Boundary-preserving, non-decreasing reparametrization gamma of [0, 1].
///
/// Construction checks monotonicity and endpoint values (to 1e-9), then pins
/// the endpoints to exactly 0 and 1 and clamps interior values into [0, 1].
class Warping {
 public:
  Warping(TimeGrid grid, std::vector<double> gamma);

  static Warping identity(const TimeGrid& grid);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> gamma() const { return gamma_; }
  std::size_t size() const { return gamma_.size(); }
  double operator[](std::size_t i) const { return gamma_[i]; }

  /// Discrete derivative of gamma (clamped at zero).
  std::vector<double> derivative() const;

  /// gamma^{-1} on the same grid, by linear re-interpolation.
  Warping inverse() const;

  /// this ∘ inner, i.e. t ↦ gamma(inner(t)).
  Warping compose(const Warping& inner) const;

 private:
  TimeGrid grid_;
  std::vector<double> gamma_;
};

/// Amplitude, phase and cosine distance of one curve to a reference.
struct DistanceTriple {
  double amplitude = 0.0;
  double phase = 0.0;
  double cosine = 0.0;

  DistanceTriple() = default;
  DistanceTriple(double amplitude, double phase, double cosine);
};

/// Trapezoid-rule approximation of ∫₀¹ f(t) g(t) dt.
double inner_product(std::span<const double> f, std::span<const double> g, const TimeGrid& grid);

double l2_norm(std::span<const double> f, const TimeGrid& grid);

/// L2 norm of f - g.
double l2_distance(std::span<const double> f, std::span<const double> g, const TimeGrid& grid);

/// Piecewise-linear interpolation of the trajectory at query points in [0, 1].
std::vector<double> interp_linear(const Trajectory& traj, std::span<const double> at);

/// Piecewise-linear interpolation of samples given on a uniform [0, 1] grid.
std::vector<double> interp_uniform(std::span<const double> values, std::span<const double> at);

/// Second-order finite differences: central in the interior, one-sided at the
/// two ends. `h` is the sample spacing.
std::vector<double> gradient(std::span<const double> values, double h);

/// Running trapezoid integral, starting at 0.
std::vector<double> cumulative_trapezoid(std::span<const double> values, double h);

}  // namespace elastic
