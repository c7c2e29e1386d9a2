#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace elastic::pipeline {

/// Tunables for the batch pipeline.
struct PipelineConfig {
  std::size_t grid_n = 101;
  int filter_order = 3;
  /// Low-pass cutoff as a fraction of the Nyquist frequency of the resampled grid.
  double cutoff_ratio = 0.1;
  std::string channel = "signal";
  int dp_max_slope = 7;
  int mean_max_iter = 20;
  double mean_tol = 1e-4;
  double rolling_window_frac = 0.1;

  /// Throws ParameterError naming the offending field.
  void validate() const;

  /// Sliding window length derived from rolling_window_frac, within [3, grid_n].
  std::size_t rolling_window() const;
};

/// Names of every recognized config key, in declaration order.
const std::vector<std::string>& config_keys();

/// Sets one field from its textual value. Throws ParameterError for unknown
/// keys or unparsable values.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment. Errors carry
/// `source:line`.
PipelineConfig parse_config(std::string_view text, std::string_view source = "<config>");

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace elastic::pipeline
