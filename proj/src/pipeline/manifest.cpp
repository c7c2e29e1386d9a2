#include "elastic/pipeline/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "elastic/errors.hpp"
#include "text.hpp"

namespace elastic::pipeline {

std::string to_string(Cohort cohort) {
  switch (cohort) {
    case Cohort::healthy:
      return "healthy";
    case Cohort::dmd:
      return "DMD";
    case Cohort::sma:
      return "SMA";
  }
  return "unknown";
}

std::optional<Cohort> parse_cohort(std::string_view raw) {
  std::string lower(text::trim(raw));
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "healthy") return Cohort::healthy;
  if (lower == "dmd") return Cohort::dmd;
  if (lower == "sma") return Cohort::sma;
  return std::nullopt;
}

Manifest parse_manifest(std::string_view content, const std::filesystem::path& source) {
  Manifest manifest{source, {}};
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  const std::string name = source.string();
  auto fail = [&](const std::string& what) -> FormatError {
    return FormatError(name + ":" + std::to_string(line_no) + ": " + what);
  };

  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) header = text::split_fields(line);
  }
  if (header.empty()) return manifest;

  auto column = [&](std::string_view col) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto id_col = column("participant_id");
  const auto cohort_col = column("cohort");
  const auto path_col = column("trial_path");
  const auto brooke_col = column("brooke_score");
  const auto dyn_col = column("dynamometry");
  if (!id_col || !cohort_col || !path_col) {
    throw fail("header must contain participant_id, cohort and trial_path");
  }

  const std::filesystem::path base = source.parent_path();
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split_fields(line);
    if (fields.size() != header.size()) {
      throw fail("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }

    ManifestEntry e;
    e.line = line_no;
    e.participant_id = fields[*id_col];
    if (e.participant_id.empty()) throw fail("empty participant_id");
    const auto cohort = parse_cohort(fields[*cohort_col]);
    if (!cohort) throw fail("cohort '" + fields[*cohort_col] + "' is not one of healthy, DMD, SMA");
    e.cohort = *cohort;
    e.trial_path = fields[*path_col];
    if (e.trial_path.empty()) throw fail("empty trial_path");
    e.resolved_path = std::filesystem::path(e.trial_path).is_absolute() ? std::filesystem::path(e.trial_path)
                                                                         : base / e.trial_path;

    if (brooke_col && !fields[*brooke_col].empty()) {
      const auto score = text::parse_number<int>(fields[*brooke_col]);
      if (!score || *score < 1 || *score > 6) throw fail("brooke_score must be an integer in 1..6");
      e.brooke_score = score;
    }
    if (dyn_col && !fields[*dyn_col].empty()) {
      const auto strength = text::parse_number<double>(fields[*dyn_col]);
      if (!strength || !(*strength >= 0.0) || !std::isfinite(*strength)) {
        throw fail("dynamometry must be a non-negative real");
      }
      e.dynamometry = strength;
    }

    if (!seen.emplace(e.participant_id, e.trial_path).second) {
      throw fail("duplicate participant_id/trial_path pair (" + e.participant_id + ", " + e.trial_path + ")");
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open manifest");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path);
}

}  // namespace elastic::pipeline
