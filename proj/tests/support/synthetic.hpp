#pragma once

// Test-only generators: analytic templates and warps with known inverses,
// and synthetic cohorts written to disk in the trial CSV format.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "elastic/core.hpp"

namespace elastic::testing {

inline constexpr double kPi = std::numbers::pi;

/// Two bumps of different height on a small ramp.
inline double bimodal(double t) {
  const auto bump = [](double t, double c, double w) { return std::exp(-(t - c) * (t - c) / (2.0 * w * w)); };
  return bump(t, 0.32, 0.08) + 0.75 * bump(t, 0.68, 0.07);
}

/// A template whose derivative vanishes only at isolated points.
inline double oscillating(double t) { return std::sin(3.0 * kPi * t) + 0.4 * std::cos(7.0 * kPi * t) + 0.5 * t; }

/// gamma(t) = t + a1 sin(pi t)/pi + a2 sin(2 pi t)/(2 pi); monotone when |a1| + |a2| < 1.
struct SmoothWarp {
  double a1 = 0.0;
  double a2 = 0.0;

  double operator()(double t) const {
    return t + a1 * std::sin(kPi * t) / kPi + a2 * std::sin(2.0 * kPi * t) / (2.0 * kPi);
  }
  double rate(double t) const { return 1.0 + a1 * std::cos(kPi * t) + a2 * std::cos(2.0 * kPi * t); }

  /// Inverse by bisection on the analytic map.
  double inverse(double y) const {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((*this)(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  static SmoothWarp random(std::mt19937_64& rng, double amplitude = 0.3) {
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    const double a1 = u(rng);
    const double a2 = u(rng);
    return {a1, a2};
  }
};

inline std::vector<double> sample(const TimeGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return v;
}

inline Trajectory make_trajectory(const TimeGrid& grid, const std::function<double(double)>& f,
                                  TrajectoryMeta meta = {}) {
  return Trajectory(grid, sample(grid, f), std::move(meta));
}

inline Warping make_warping(const TimeGrid& grid, const SmoothWarp& w) { return Warping(grid, sample(grid, w)); }

inline double linf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rmse(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

/// Writes one trial CSV sampled at `rate_hz` for `duration_s` seconds.
inline void write_trial(const std::filesystem::path& path, const std::function<double(double)>& shape,
                        double duration_s, double rate_hz, const std::string& channel = "signal") {
  std::ofstream out(path);
  out << "time_s," << channel << "\n";
  const auto count = static_cast<std::size_t>(std::lround(duration_s * rate_hz)) + 1;
  char buf[64];
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / rate_hz;
    std::snprintf(buf, sizeof buf, "%.6f,%.9g\n", t, shape(t / duration_s));
    out << buf;
  }
}

struct CohortSpec {
  std::size_t healthy = 10;
  std::size_t patients = 10;
  /// Patients replicate the healthy trials exactly (null effect).
  bool null_effect = false;
  std::uint64_t seed = 20240607;
};

/// Planted-effect cohort: healthy trials are randomly warped copies of the
/// bimodal template (scaled to deg/s); patient trials are warped copies with a
/// damped second bump, a slower rise and mild tremor. Returns the manifest path.
inline std::filesystem::path write_cohort(const std::filesystem::path& dir, const CohortSpec& spec) {
  std::filesystem::create_directories(dir / "trials");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> duration(2.5, 3.5);
  std::uniform_real_distribution<double> damp(0.25, 0.55);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);

  std::ofstream manifest(dir / "manifest.csv");
  manifest << "participant_id,cohort,trial_path,brooke_score,dynamometry\n";

  std::vector<std::pair<SmoothWarp, double>> healthy_params;
  for (std::size_t i = 0; i < spec.healthy; ++i) {
    const SmoothWarp w = SmoothWarp::random(rng);
    const double d = duration(rng);
    healthy_params.emplace_back(w, d);
    const std::string id = "H" + std::to_string(100 + i);
    write_trial(dir / "trials" / (id + ".csv"), [w](double s) { return 120.0 * bimodal(w(s)); }, d, 200.0);
    manifest << id << ",healthy,trials/" << id << ".csv,1," << 30 + static_cast<int>(i % 5) << "\n";
  }

  for (std::size_t i = 0; i < spec.patients; ++i) {
    const std::string id = "P" + std::to_string(100 + i);
    const char* cohort = i % 2 == 0 ? "DMD" : "SMA";
    if (spec.null_effect) {
      const auto& [w, d] = healthy_params[i % healthy_params.size()];
      write_trial(dir / "trials" / (id + ".csv"), [w](double s) { return 120.0 * bimodal(w(s)); }, d, 200.0);
      manifest << id << "," << cohort << ",trials/" << id << ".csv,1," << 30 + static_cast<int>(i % 5) << "\n";
      continue;
    }
    const SmoothWarp w = SmoothWarp::random(rng);
    const double d = duration(rng);
    const double k = damp(rng);
    const double ph = phase(rng);
    auto shape = [w, k, ph](double s) {
      const double u = w(s);
      const auto bump = [](double t, double c, double width) {
        return std::exp(-(t - c) * (t - c) / (2.0 * width * width));
      };
      const double tremor = 0.12 * std::sin(9.0 * kPi * u + ph) * bump(u, 0.5, 0.25);
      return 120.0 * (0.8 * bump(u, 0.36, 0.12) + k * 0.75 * bump(u, 0.70, 0.07) + tremor);
    };
    write_trial(dir / "trials" / (id + ".csv"), shape, d, 200.0);
    const int brooke = 2 + static_cast<int>(i % 4);
    manifest << id << "," << cohort << ",trials/" << id << ".csv," << brooke << "," << 10 + static_cast<int>(i) << "\n";
  }
  return dir / "manifest.csv";
}

}  // namespace elastic::testing
