#include "elastic/pipeline/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "elastic/errors.hpp"
#include "text.hpp"

namespace elastic::pipeline {

namespace {

template <typename T>
T parse_field(std::string_view key, std::string_view value, const char* expected) {
  const auto parsed = text::parse_number<T>(value);
  if (!parsed || (std::is_floating_point_v<T> && !std::isfinite(static_cast<double>(*parsed)))) {
    throw ParameterError("field '" + std::string(key) + "': expected " + expected + ", got '" +
                         std::string(value) + "'");
  }
  return *parsed;
}

[[noreturn]] void out_of_range(const char* field, const std::string& constraint) {
  throw ParameterError("field '" + std::string(field) + "': must be " + constraint);
}

}  // namespace

void PipelineConfig::validate() const {
  if (grid_n < 3 || grid_n > 100000) out_of_range("grid_n", "in [3, 100000]");
  if (filter_order < 1 || filter_order > 10) out_of_range("filter_order", "in [1, 10]");
  if (grid_n <= 3 * static_cast<std::size_t>(filter_order)) {
    out_of_range("grid_n", "greater than 3 * filter_order for edge padding");
  }
  if (!(cutoff_ratio > 0.0 && cutoff_ratio < 1.0)) out_of_range("cutoff_ratio", "in (0, 1)");
  if (channel.empty() || channel.find(',') != std::string::npos) {
    out_of_range("channel", "a non-empty column name without commas");
  }
  if (dp_max_slope < 1 || dp_max_slope > 32) out_of_range("dp_max_slope", "in [1, 32]");
  if (mean_max_iter < 1 || mean_max_iter > 1000) out_of_range("mean_max_iter", "in [1, 1000]");
  if (!(mean_tol >= 0.0 && std::isfinite(mean_tol))) out_of_range("mean_tol", "finite and >= 0");
  if (!(rolling_window_frac > 0.0 && rolling_window_frac <= 1.0)) out_of_range("rolling_window_frac", "in (0, 1]");
}

std::size_t PipelineConfig::rolling_window() const {
  const auto w = static_cast<std::size_t>(std::lround(rolling_window_frac * static_cast<double>(grid_n)));
  return std::clamp<std::size_t>(w, 3, grid_n);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"grid_n",       "filter_order",  "cutoff_ratio", "channel",
                                             "dp_max_slope", "mean_max_iter", "mean_tol",     "rolling_window_frac"};
  return keys;
}

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value) {
  value = text::trim(value);
  if (key == "grid_n") {
    config.grid_n = parse_field<std::size_t>(key, value, "a positive integer");
  } else if (key == "filter_order") {
    config.filter_order = parse_field<int>(key, value, "an integer");
  } else if (key == "cutoff_ratio") {
    config.cutoff_ratio = parse_field<double>(key, value, "a real number");
  } else if (key == "channel") {
    config.channel = std::string(value);
  } else if (key == "dp_max_slope") {
    config.dp_max_slope = parse_field<int>(key, value, "an integer");
  } else if (key == "mean_max_iter") {
    config.mean_max_iter = parse_field<int>(key, value, "an integer");
  } else if (key == "mean_tol") {
    config.mean_tol = parse_field<double>(key, value, "a real number");
  } else if (key == "rolling_window_frac") {
    config.rolling_window_frac = parse_field<double>(key, value, "a real number");
  } else {
    throw ParameterError("unknown key '" + std::string(key) + "'");
  }
}

PipelineConfig parse_config(std::string_view source_text, std::string_view source) {
  PipelineConfig config;
  std::istringstream in{std::string(source_text)};
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return std::string(source) + ":" + std::to_string(line_no) + ": "; };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = text::trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParameterError(where() + "expected 'key = value'");
    const auto key = text::trim(body.substr(0, eq));
    try {
      set_config_value(config, key, body.substr(eq + 1));
    } catch (const ParameterError& e) {
      throw ParameterError(where() + e.what());
    }
  }
  try {
    config.validate();
  } catch (const ParameterError& e) {
    throw ParameterError(std::string(source) + ": " + e.what());
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace elastic::pipeline
