// Batch front-end: elastic registration and motion-quality scoring of
// trajectory cohorts described by a manifest.

#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "elastic/errors.hpp"
#include "elastic/pipeline/config.hpp"
#include "elastic/pipeline/ingest.hpp"
#include "elastic/pipeline/report.hpp"

namespace {

using namespace elastic::pipeline;

struct CommonArgs {
  std::string manifest;
  std::string config;
  std::string out;
  bool skip_bad = false;
  bool cosine_on_srvf = false;
  std::map<std::string, std::string> overrides;
};

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool wants_output) {
  cmd->add_option("--manifest", args.manifest, "Cohort manifest CSV")->required();
  cmd->add_option("--config", args.config, "Pipeline config file (key = value lines)");
  if (wants_output) cmd->add_option("--out", args.out, "Output directory")->required();
  cmd->add_flag("--skip-bad", args.skip_bad, "Skip unreadable trials instead of aborting");
  if (wants_output) {
    cmd->add_flag("--cosine-on-srvf", args.cosine_on_srvf,
                  "Compute cosine distance on aligned SRVFs instead of aligned signals");
  }
  for (const std::string& key : config_keys()) {
    cmd->add_option_function<std::string>(
        flag_name(key), [&args, key](const std::string& v) { args.overrides[key] = v; },
        "Override config field " + key);
  }
}

PipelineConfig resolve_config(const CommonArgs& args) {
  PipelineConfig config = args.config.empty() ? PipelineConfig{} : load_config(args.config);
  for (const auto& [key, value] : args.overrides) {
    try {
      set_config_value(config, key, value);
    } catch (const elastic::ParameterError& e) {
      throw elastic::ParameterError(std::string("command line: ") + e.what());
    }
  }
  try {
    config.validate();
  } catch (const elastic::ParameterError& e) {
    throw elastic::ParameterError(std::string("command line: ") + e.what());
  }
  return config;
}

void report_skipped(const std::vector<SkippedTrial>& skipped) {
  if (skipped.empty()) return;
  std::cerr << "skipped " << skipped.size() << " trial(s):\n";
  for (const auto& s : skipped) std::cerr << "  " << s.entry.participant_id << ": " << s.reason << '\n';
}

int run_ingest_check(const CommonArgs& args) {
  const PipelineConfig config = resolve_config(args);
  const IngestResult result = ingest(std::filesystem::path(args.manifest), config, args.skip_bad);
  std::size_t healthy = 0;
  for (const auto& t : result.trials) healthy += is_patient(t.entry.cohort) ? 0 : 1;
  std::cout << "ingested " << result.trials.size() << " trial(s) (" << healthy << " healthy, "
            << result.trials.size() - healthy << " patient), skipped " << result.skipped.size() << '\n';
  report_skipped(result.skipped);
  return 0;
}

int run_stage(const CommonArgs& args, Stage stage) {
  const PipelineConfig config = resolve_config(args);
  const CohortReport report =
      run_pipeline(args.manifest, config, args.out, stage, PipelineOptions{args.skip_bad, args.cosine_on_srvf});
  report_skipped(report.skipped);
  std::cout << "wrote " << report.records.size() << " trial(s) to " << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic shape analysis of motion trajectories"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* ingest_check = app.add_subcommand("ingest-check", "Parse and preprocess every trial, report problems");
  add_common(ingest_check, args, false);

  const std::vector<std::pair<std::string, std::pair<Stage, std::string>>> stages{
      {"mean", {Stage::mean, "Elastic mean of the healthy cohort"}},
      {"align", {Stage::align, "Align every trial to the healthy mean"}},
      {"distances", {Stage::distances, "Amplitude, phase and cosine distance to the healthy mean"}},
      {"stats", {Stage::stats, "Distances plus cohort t-tests and covariate regressions"}},
      {"report", {Stage::report, "Full pipeline including distance matrices and rolling correlation"}},
  };
  std::vector<std::pair<CLI::App*, Stage>> stage_commands;
  for (const auto& [name, info] : stages) {
    auto* cmd = app.add_subcommand(name, info.second);
    add_common(cmd, args, true);
    stage_commands.emplace_back(cmd, info.first);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest_check->parsed()) return run_ingest_check(args);
    for (const auto& [cmd, stage] : stage_commands) {
      if (cmd->parsed()) return run_stage(args, stage);
    }
  } catch (const elastic::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
