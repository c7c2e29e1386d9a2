#include <algorithm>
#include <cmath>
#include <limits>

#include "elastic/analytics.hpp"

namespace elastic {

std::vector<double> rolling_correlation(const Trajectory& a, const Trajectory& b, std::size_t window) {
  if (!(a.grid() == b.grid())) throw DimensionError("rolling_correlation: grid mismatch");
  const std::size_t n = a.size();
  if (window < 3 || window > n) {
    throw ParameterError("rolling_correlation: window must lie in [3, " + std::to_string(n) + "], got " +
                         std::to_string(window));
  }

  const auto x = a.values();
  const auto y = b.values();
  std::vector<double> out;
  out.reserve(n - window + 1);
  for (std::size_t start = 0; start + window <= n; ++start) {
    double mx = 0.0;
    double my = 0.0;
    double scale_x = 0.0;
    double scale_y = 0.0;
    for (std::size_t k = start; k < start + window; ++k) {
      mx += x[k];
      my += y[k];
      scale_x = std::max(scale_x, std::abs(x[k]));
      scale_y = std::max(scale_y, std::abs(y[k]));
    }
    mx /= static_cast<double>(window);
    my /= static_cast<double>(window);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t k = start; k < start + window; ++k) {
      const double dx = x[k] - mx;
      const double dy = y[k] - my;
      sxx += dx * dx;
      syy += dy * dy;
      sxy += dx * dy;
    }
    // Residual spread at rounding level counts as constant.
    const double w = static_cast<double>(window);
    if (sxx <= w * (1e-12 * scale_x) * (1e-12 * scale_x) || syy <= w * (1e-12 * scale_y) * (1e-12 * scale_y)) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      out.push_back(std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0));
    }
  }
  return out;
}

}  // namespace elastic
