#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "elastic/analytics.hpp"
#include "elastic/pipeline/config.hpp"
#include "elastic/pipeline/ingest.hpp"
#include "elastic/registration.hpp"

namespace elastic::pipeline {

/// Pipeline stages; each one computes and writes a superset of the previous.
enum class Stage { mean, align, distances, stats, report };

struct PipelineOptions {
  bool skip_bad = false;
  /// Cosine distance on aligned SRVFs instead of aligned signals.
  bool cosine_on_srvf = false;
};

/// One ingested trial and everything computed for it against the healthy mean.
struct ParticipantRecord {
  ManifestEntry entry;
  /// participant_id, or participant_id/trial when the participant has several trials.
  std::string label;
  std::string trial;
  Trajectory signal;
  std::optional<Warping> warp;
  std::optional<Trajectory> aligned;
  std::optional<DistanceTriple> distances;
  std::vector<double> rolling;
};

struct TTestSummary {
  Metric metric;
  std::size_t n_healthy = 0;
  std::size_t n_patient = 0;
  std::optional<TTestResult> result;
  std::string note;
};

struct RegressionSummary {
  Metric distance;
  std::string covariate;
  std::size_t n = 0;
  std::optional<RegressionResult> result;
  std::string note;
};

struct CohortReport {
  PipelineConfig config;
  Stage stage = Stage::report;
  /// Ordered by participant_id, then trial path.
  std::vector<ParticipantRecord> records;
  std::vector<SkippedTrial> skipped;
  std::size_t n_healthy = 0;
  std::size_t n_patient = 0;
  std::optional<Trajectory> healthy_mean;
  int mean_iterations = 0;
  bool mean_converged = false;
  std::vector<TTestSummary> ttests;
  std::vector<RegressionSummary> regressions;
  /// Rows/columns ordered healthy, DMD, SMA, then by record order.
  std::optional<DistanceMatrix> matrix_pre;
  std::optional<DistanceMatrix> matrix_post;
  std::size_t rolling_window = 0;
};

/// Runs the analysis on already-ingested trials up to `stage`.
/// Throws InsufficientDataError when fewer than two healthy trials are present.
CohortReport build_report(IngestResult ingested, const PipelineConfig& config, Stage stage,
                          const PipelineOptions& options = {});

/// Writes the files belonging to `report.stage` into `out_dir` (created if absent).
void write_report(const CohortReport& report, const std::filesystem::path& out_dir);

/// Ingest, build and write in one call.
CohortReport run_pipeline(const std::filesystem::path& manifest_path, const PipelineConfig& config,
                          const std::filesystem::path& out_dir, Stage stage = Stage::report,
                          const PipelineOptions& options = {});

}  // namespace elastic::pipeline
