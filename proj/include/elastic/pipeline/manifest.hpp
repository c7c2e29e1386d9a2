#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elastic::pipeline {

enum class Cohort { healthy, dmd, sma };

std::string to_string(Cohort cohort);

/// Case-insensitive: healthy, DMD, SMA.
std::optional<Cohort> parse_cohort(std::string_view text);

inline bool is_patient(Cohort c) { return c != Cohort::healthy; }

struct ManifestEntry {
  std::string participant_id;
  Cohort cohort = Cohort::healthy;
  /// Path as written in the manifest.
  std::string trial_path;
  /// trial_path resolved against the manifest's directory.
  std::filesystem::path resolved_path;
  std::optional<int> brooke_score;
  std::optional<double> dynamometry;
  /// 1-based line in the manifest file.
  std::size_t line = 0;
};

/// Cohort manifest: a CSV with header columns participant_id, cohort,
/// trial_path and optionally brooke_score, dynamometry (in any order).
struct Manifest {
  std::filesystem::path source;
  std::vector<ManifestEntry> entries;
};

Manifest parse_manifest(std::string_view text, const std::filesystem::path& source);

Manifest load_manifest(const std::filesystem::path& path);

}  // namespace elastic::pipeline
