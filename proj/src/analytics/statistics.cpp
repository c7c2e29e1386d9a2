#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "elastic/analytics.hpp"

namespace elastic {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEpsilon = 1e-16;
constexpr int kMaxContinuedFractionTerms = 1000;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) return h;
  }
  return h;
}

struct SampleMoments {
  double mean;
  double variance;
};

SampleMoments moments(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, ss / (n - 1.0)};
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ParameterError("incomplete beta: shape parameters must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // Continued fraction converges fastest on the side x < (a+1)/(a+b+2).
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw ParameterError("Student t: degrees of freedom must be positive");
  if (std::isnan(t)) throw DomainError("Student t: statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double p = regularized_incomplete_beta(dof / (dof + t * t), dof / 2.0, 0.5);
  return std::clamp(p, 0.0, 1.0);
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw InsufficientDataError("welch_t_test: each sample needs at least 2 values");
  }
  const auto [mean_a, var_a] = moments(a);
  const auto [mean_b, var_b] = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double sa = var_a / na;
  const double sb = var_b / nb;
  const double se2 = sa + sb;

  if (se2 == 0.0) {
    if (mean_a == mean_b) return {0.0, 1.0, na + nb - 2.0};
    throw DegenerateInputError("welch_t_test: both samples constant with different means");
  }
  const double t = (mean_a - mean_b) / std::sqrt(se2);
  const double dof = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  return {t, student_t_two_sided_p(t, dof), dof};
}

RegressionResult linear_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("linear_regression: x and y lengths differ");
  if (x.size() < 3) throw InsufficientDataError("linear_regression: need at least 3 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw DegenerateInputError("linear_regression: regressor is constant");

  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  if (syy == 0.0) return {slope, intercept, 0.0, 1.0};

  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = n - 2.0;
  const double one_minus_r2 = 1.0 - r * r;
  if (one_minus_r2 <= 0.0) return {slope, intercept, r, 0.0};
  const double t = r * std::sqrt(dof / one_minus_r2);
  return {slope, intercept, r, student_t_two_sided_p(t, dof)};
}

}  // namespace elastic
