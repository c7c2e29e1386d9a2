#include "elastic/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace elastic {

namespace {

using Complex = std::complex<double>;

/// Coefficients of prod_k (z - roots[k]), highest power first.
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> coeffs{1.0};
  for (const Complex& r : roots) {
    coeffs.push_back(0.0);
    for (std::size_t i = coeffs.size() - 1; i > 0; --i) coeffs[i] -= r * coeffs[i - 1];
  }
  return coeffs;
}

/// Direct-form II transposed filter starting from state `zi`.
std::vector<double> lfilter(const FilterCoefficients& f, std::span<const double> x, std::vector<double> zi) {
  const std::size_t order = f.a.size() - 1;
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double out = f.b[0] * x[n] + zi[0];
    for (std::size_t k = 0; k + 1 < order; ++k) {
      zi[k] = f.b[k + 1] * x[n] - f.a[k + 1] * out + zi[k + 1];
    }
    zi[order - 1] = f.b[order] * x[n] - f.a[order] * out;
    y[n] = out;
  }
  return y;
}

/// Filter state that yields a steady output for a unit step input.
std::vector<double> step_steady_state(const FilterCoefficients& f) {
  const std::size_t order = f.a.size() - 1;
  double sum_b = 0.0;
  double sum_a = 0.0;
  for (double v : f.b) sum_b += v;
  for (double v : f.a) sum_a += v;
  const double gain = sum_b / sum_a;
  std::vector<double> zi(order);
  zi[order - 1] = f.b[order] - f.a[order] * gain;
  for (std::size_t k = order - 1; k-- > 0;) zi[k] = f.b[k + 1] - f.a[k + 1] * gain + zi[k + 1];
  return zi;
}

std::vector<double> scaled(std::vector<double> v, double s) {
  for (double& x : v) x *= s;
  return v;
}

}  // namespace

RawRecording::RawRecording(std::vector<double> timestamps, std::vector<double> samples,
                           std::optional<double> rate_hint)
    : timestamps_(std::move(timestamps)), samples_(std::move(samples)), rate_hint_(rate_hint) {
  if (timestamps_.size() != samples_.size()) {
    throw DimensionError("RawRecording: " + std::to_string(timestamps_.size()) + " timestamps but " +
                         std::to_string(samples_.size()) + " samples");
  }
  if (timestamps_.size() < 2) {
    throw InsufficientDataError("RawRecording needs at least 2 distinct timestamps");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(timestamps_[i]) || !std::isfinite(samples_[i])) {
      throw DomainError("RawRecording: non-finite value at sample " + std::to_string(i));
    }
    if (i > 0 && !(timestamps_[i] > timestamps_[i - 1])) {
      throw DomainError("RawRecording: timestamps not strictly increasing at sample " + std::to_string(i));
    }
  }
  if (rate_hint_ && !(*rate_hint_ > 0.0)) throw ParameterError("RawRecording: rate hint must be positive");
}

Trajectory resample(const RawRecording& rec, std::size_t n, TrajectoryMeta meta) {
  TimeGrid grid(n);
  const auto& ts = rec.timestamps();
  const auto& xs = rec.samples();
  const double t0 = ts.front();
  const double span = ts.back() - t0;
  const double snap = 1e-9 * span;

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = i + 1 == n ? ts.back() : t0 + span * grid[i];
    auto it = std::upper_bound(ts.begin(), ts.end(), tau);
    std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - ts.begin()), 1, ts.size() - 1);
    std::size_t lo = hi - 1;
    if (std::abs(tau - ts[lo]) <= snap) {
      values[i] = xs[lo];
    } else if (std::abs(tau - ts[hi]) <= snap) {
      values[i] = xs[hi];
    } else {
      const double frac = (tau - ts[lo]) / (ts[hi] - ts[lo]);
      values[i] = xs[lo] + frac * (xs[hi] - xs[lo]);
    }
  }
  return Trajectory(std::move(grid), std::move(values), std::move(meta));
}

FilterCoefficients design_butterworth_lowpass(int order, double cutoff_ratio) {
  if (order < 1) throw ParameterError("Butterworth order must be >= 1, got " + std::to_string(order));
  if (!(cutoff_ratio > 0.0 && cutoff_ratio < 1.0)) {
    throw ParameterError("Butterworth cutoff ratio must lie in (0, 1), got " + std::to_string(cutoff_ratio));
  }
  const auto n = static_cast<std::size_t>(order);

  // Bilinear transform with fs = 2 (Nyquist = 1); prewarp so the -3 dB point
  // lands exactly on cutoff_ratio.
  constexpr double fs2 = 4.0;
  const double warped = fs2 * std::tan(std::numbers::pi * cutoff_ratio / 2.0);

  std::vector<Complex> z_poles;
  Complex gain_den = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double angle = std::numbers::pi * static_cast<double>(2 * k + n - 1) / static_cast<double>(2 * n);
    const Complex s_pole = warped * std::polar(1.0, angle);
    z_poles.push_back((fs2 + s_pole) / (fs2 - s_pole));
    gain_den *= fs2 - s_pole;
  }
  const double gain = std::pow(warped, static_cast<double>(n)) / gain_den.real();

  const auto b_c = poly_from_roots(std::vector<Complex>(n, Complex(-1.0, 0.0)));
  const auto a_c = poly_from_roots(z_poles);

  FilterCoefficients f;
  for (const Complex& c : b_c) f.b.push_back(gain * c.real());
  for (const Complex& c : a_c) f.a.push_back(c.real());

  // Unit DC gain up to rounding.
  double sum_b = 0.0;
  double sum_a = 0.0;
  for (double v : f.b) sum_b += v;
  for (double v : f.a) sum_a += v;
  for (double& v : f.b) v *= sum_a / sum_b;
  return f;
}

Trajectory butterworth_lowpass(const Trajectory& traj, int order, double cutoff_ratio) {
  const FilterCoefficients f = design_butterworth_lowpass(order, cutoff_ratio);
  const auto x = traj.values();
  const std::size_t n = x.size();
  const std::size_t pad = 3 * static_cast<std::size_t>(order);
  if (n <= pad) {
    throw InsufficientDataError("butterworth_lowpass: signal of " + std::to_string(n) +
                                " samples is too short for order " + std::to_string(order));
  }

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);

  const std::vector<double> zi = step_steady_state(f);
  std::vector<double> fwd = lfilter(f, ext, scaled(zi, ext.front()));
  std::reverse(fwd.begin(), fwd.end());
  std::vector<double> bwd = lfilter(f, fwd, scaled(zi, fwd.front()));
  std::reverse(bwd.begin(), bwd.end());

  return traj.with_values({bwd.begin() + static_cast<std::ptrdiff_t>(pad),
                           bwd.begin() + static_cast<std::ptrdiff_t>(pad + n)});
}

Trajectory derivative(const Trajectory& traj) {
  return traj.with_values(gradient(traj.values(), traj.grid().spacing()));
}

}  // namespace elastic
