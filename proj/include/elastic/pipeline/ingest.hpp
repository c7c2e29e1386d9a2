#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "elastic/core.hpp"
#include "elastic/pipeline/config.hpp"
#include "elastic/pipeline/manifest.hpp"
#include "elastic/preprocess.hpp"

namespace elastic::pipeline {

/// Trials with fewer data rows are rejected at ingestion.
constexpr std::size_t kMinTrialSamples = 8;

/// Reads a trial CSV with a `time_s` column and the named channel column.
/// Errors name the file and the 1-based line of the offending row.
RawRecording read_trial_csv(const std::filesystem::path& path, std::string_view channel);

struct IngestedTrial {
  ManifestEntry entry;
  Trajectory trajectory;
};

struct SkippedTrial {
  ManifestEntry entry;
  std::string reason;
};

struct IngestResult {
  std::vector<IngestedTrial> trials;
  std::vector<SkippedTrial> skipped;
};

/// Parse, resample onto config.grid_n points, then low-pass every trial.
/// Without `skip_bad` the first failing trial (manifest order) aborts with its
/// error; with it, failures are collected in `skipped`.
IngestResult ingest(const Manifest& manifest, const PipelineConfig& config, bool skip_bad = false);

IngestResult ingest(const std::filesystem::path& manifest_path, const PipelineConfig& config, bool skip_bad = false);

}  // namespace elastic::pipeline
