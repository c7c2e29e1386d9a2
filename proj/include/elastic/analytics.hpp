#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "elastic/core.hpp"
#include "elastic/registration.hpp"

namespace elastic {

enum class Metric { amplitude, phase, cosine };

std::string to_string(Metric metric);

/// Square matrix of pairwise distances with one label per row/column.
/// Always symmetric with a zero diagonal and non-negative entries.
class DistanceMatrix {
 public:
  DistanceMatrix(std::vector<std::string> labels, std::vector<double> values);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * size() + col]; }
  /// Row-major entries.
  std::span<const double> values() const { return values_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

/// Pairwise distance matrix. With `registered`, curve j is aligned to curve i
/// before the metric is applied to the pair; the raw matrix is then averaged
/// with its transpose. The phase metric is only defined for registered pairs.
DistanceMatrix pairwise_matrix(std::span<const Trajectory> curves, Metric metric, bool registered,
                               int max_slope = kDefaultMaxSlope);

struct TTestResult {
  double t_statistic;
  double p_value;
  double dof;
};

/// Two-sided Welch (unequal variance) two-sample t-test.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct RegressionResult {
  double slope;
  double intercept;
  double r;
  double p_value;
};

/// Ordinary least squares y = slope*x + intercept; p tests slope != 0 with
/// n-2 degrees of freedom.
RegressionResult linear_regression(std::span<const double> x, std::span<const double> y);

/// Pearson correlation on every length-`window` segment (stride 1). Segments
/// where either side is constant yield NaN.
std::vector<double> rolling_correlation(const Trajectory& a, const Trajectory& b, std::size_t window);

/// Two-sided tail probability P(|T| >= |t|) for Student's t with `dof`
/// degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// Regularized incomplete beta function I_x(a, b), by continued fraction.
double regularized_incomplete_beta(double x, double a, double b);

}  // namespace elastic
