#include "elastic/pipeline/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include "elastic/errors.hpp"
#include "elastic/parallel.hpp"
#include "text.hpp"

namespace elastic::pipeline {

RawRecording read_trial_csv(const std::filesystem::path& path, std::string_view channel) {
  const std::string name = path.string();
  std::ifstream in(path);
  if (!in) throw IoError(name + ": cannot open trial file");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) header = text::split_fields(line);
  }
  if (header.empty()) throw FormatError(name + ": missing header row");

  const auto time_it = std::find(header.begin(), header.end(), "time_s");
  const auto chan_it = std::find(header.begin(), header.end(), channel);
  if (time_it == header.end()) throw FormatError(name + ":" + std::to_string(line_no) + ": missing column 'time_s'");
  if (chan_it == header.end()) {
    throw FormatError(name + ":" + std::to_string(line_no) + ": missing column '" + std::string(channel) + "'");
  }
  const auto time_col = static_cast<std::size_t>(time_it - header.begin());
  const auto chan_col = static_cast<std::size_t>(chan_it - header.begin());

  std::vector<double> times;
  std::vector<double> samples;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto where = name + ":" + std::to_string(line_no) + ": ";
    const auto fields = text::split_fields(line);
    if (fields.size() != header.size()) {
      throw FormatError(where + "expected " + std::to_string(header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    const auto t = text::parse_number<double>(fields[time_col]);
    const auto v = text::parse_number<double>(fields[chan_col]);
    if (!t || !std::isfinite(*t)) throw FormatError(where + "invalid time_s value '" + fields[time_col] + "'");
    if (!v || !std::isfinite(*v)) throw FormatError(where + "invalid " + std::string(channel) + " value '" + fields[chan_col] + "'");
    if (!times.empty() && !(*t > times.back())) {
      throw FormatError(where + "non-monotone timestamp " + fields[time_col] + " (previous row was " +
                        text::format_real(times.back()) + ")");
    }
    times.push_back(*t);
    samples.push_back(*v);
  }
  if (samples.size() < kMinTrialSamples) {
    throw InsufficientDataError(name + ": " + std::to_string(samples.size()) + " data rows, need at least " +
                                std::to_string(kMinTrialSamples));
  }
  return RawRecording(std::move(times), std::move(samples));
}

IngestResult ingest(const Manifest& manifest, const PipelineConfig& config, bool skip_bad) {
  if (manifest.entries.empty()) throw EmptyInputError(manifest.source.string() + ": manifest has no trials");
  config.validate();

  const std::size_t m = manifest.entries.size();
  std::vector<std::optional<Trajectory>> processed(m);
  std::vector<std::string> failures(m);

  parallel_for(m, [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    auto run = [&] {
      const RawRecording raw = read_trial_csv(e.resolved_path, config.channel);
      TrajectoryMeta meta{e.participant_id, to_string(e.cohort), e.resolved_path.stem().string()};
      const Trajectory resampled = resample(raw, config.grid_n, std::move(meta));
      processed[i] = butterworth_lowpass(resampled, config.filter_order, config.cutoff_ratio);
    };
    if (!skip_bad) {
      run();
      return;
    }
    try {
      run();
    } catch (const Error& err) {
      failures[i] = err.what();
    }
  });

  IngestResult result;
  for (std::size_t i = 0; i < m; ++i) {
    if (processed[i]) {
      result.trials.push_back({manifest.entries[i], std::move(*processed[i])});
    } else {
      result.skipped.push_back({manifest.entries[i], failures[i]});
    }
  }
  return result;
}

IngestResult ingest(const std::filesystem::path& manifest_path, const PipelineConfig& config, bool skip_bad) {
  return ingest(load_manifest(manifest_path), config, skip_bad);
}

}  // namespace elastic::pipeline
