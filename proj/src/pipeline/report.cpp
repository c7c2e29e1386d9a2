#include "elastic/pipeline/report.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "elastic/errors.hpp"
#include "json.hpp"
#include "text.hpp"

namespace elastic::pipeline {

namespace {

using Json = nlohmann::ordered_json;

int cohort_rank(Cohort c) { return static_cast<int>(c); }

std::vector<ParticipantRecord> make_records(std::vector<IngestedTrial> trials) {
  std::sort(trials.begin(), trials.end(), [](const IngestedTrial& a, const IngestedTrial& b) {
    return std::tie(a.entry.participant_id, a.entry.trial_path) < std::tie(b.entry.participant_id, b.entry.trial_path);
  });
  std::map<std::string, std::size_t> trials_per_participant;
  for (const auto& t : trials) ++trials_per_participant[t.entry.participant_id];

  std::vector<ParticipantRecord> records;
  records.reserve(trials.size());
  for (auto& t : trials) {
    std::string trial = t.trajectory.meta().trial;
    std::string label = t.entry.participant_id;
    if (trials_per_participant[label] > 1) label += "/" + trial;
    records.push_back(ParticipantRecord{std::move(t.entry), std::move(label), std::move(trial),
                                        std::move(t.trajectory), std::nullopt, std::nullopt, std::nullopt, {}});
  }
  return records;
}

double metric_of(const DistanceTriple& d, Metric m) {
  switch (m) {
    case Metric::amplitude:
      return d.amplitude;
    case Metric::phase:
      return d.phase;
    case Metric::cosine:
      return d.cosine;
  }
  return 0.0;
}

TTestSummary cohort_ttest(const std::vector<ParticipantRecord>& records, Metric metric) {
  std::vector<double> healthy;
  std::vector<double> patients;
  for (const auto& r : records) {
    (is_patient(r.entry.cohort) ? patients : healthy).push_back(metric_of(*r.distances, metric));
  }
  TTestSummary s{metric, healthy.size(), patients.size(), std::nullopt, {}};
  try {
    s.result = welch_t_test(healthy, patients);
  } catch (const Error& e) {
    s.note = e.what();
  }
  return s;
}

RegressionSummary covariate_regression(const std::vector<ParticipantRecord>& records, Metric distance,
                                       const std::string& covariate) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : records) {
    std::optional<double> value;
    if (covariate == "brooke_score" && r.entry.brooke_score) value = *r.entry.brooke_score;
    if (covariate == "dynamometry" && r.entry.dynamometry) value = *r.entry.dynamometry;
    if (!value) continue;
    x.push_back(*value);
    y.push_back(metric_of(*r.distances, distance));
  }
  RegressionSummary s{distance, covariate, x.size(), std::nullopt, {}};
  try {
    s.result = linear_regression(x, y);
  } catch (const Error& e) {
    s.note = e.what();
  }
  return s;
}

DistanceMatrix cosine_matrix(const std::vector<ParticipantRecord>& records, const std::vector<std::size_t>& order,
                             bool registered, int max_slope) {
  std::vector<Trajectory> curves;
  std::vector<std::string> labels;
  for (std::size_t idx : order) {
    curves.push_back(records[idx].signal);
    labels.push_back(records[idx].label);
  }
  const DistanceMatrix raw = pairwise_matrix(curves, Metric::cosine, registered, max_slope);
  return DistanceMatrix(std::move(labels), {raw.values().begin(), raw.values().end()});
}

void prepare_output_dir(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string() + ": " + ec.message());
  if (!std::filesystem::is_directory(out_dir)) throw IoError(out_dir.string() + ": not a directory");
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!keep) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void write_signal(const Trajectory& traj, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "t,value\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << text::format_real(traj.grid()[i]) << ',' << text::format_real(traj[i]) << '\n';
  }
  finish(out, path);
}

void write_long_table(const CohortReport& report, const std::filesystem::path& path, const char* column,
                      bool warps) {
  auto out = open_output(path);
  out << "participant,cohort,trial,t," << column << '\n';
  for (const auto& r : report.records) {
    const auto values = warps ? r.warp->gamma() : r.aligned->values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << r.entry.participant_id << ',' << to_string(r.entry.cohort) << ',' << r.trial << ','
          << text::format_real(r.signal.grid()[i]) << ',' << text::format_real(values[i]) << '\n';
    }
  }
  finish(out, path);
}

void write_distances(const CohortReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "participant,cohort,trial,amplitude,phase,cosine\n";
  for (const auto& r : report.records) {
    out << r.entry.participant_id << ',' << to_string(r.entry.cohort) << ',' << r.trial << ','
        << text::format_real(r.distances->amplitude) << ',' << text::format_real(r.distances->phase) << ','
        << text::format_real(r.distances->cosine) << '\n';
  }
  finish(out, path);
}

void write_matrix(const DistanceMatrix& m, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "participant";
  for (const auto& l : m.labels()) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.labels()[i];
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << text::format_real(m(i, j));
    out << '\n';
  }
  finish(out, path);
}

void write_rolling(const CohortReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": " + ec.message());
  std::set<std::string> used;
  const double h = report.healthy_mean->grid().spacing();
  const double half = 0.5 * static_cast<double>(report.rolling_window - 1);
  for (const auto& r : report.records) {
    std::string name = sanitize(r.label);
    for (int k = 2; !used.insert(name).second; ++k) name = sanitize(r.label) + "-" + std::to_string(k);
    const auto path = dir / (name + ".csv");
    auto out = open_output(path);
    out << "window_start_t,window_center_t,correlation\n";
    for (std::size_t s = 0; s < r.rolling.size(); ++s) {
      const double start = static_cast<double>(s) * h;
      out << text::format_real(start) << ',' << text::format_real(start + half * h) << ','
          << text::format_real(r.rolling[s]) << '\n';
    }
    finish(out, path);
  }
}

Json config_json(const PipelineConfig& c) {
  return Json{{"grid_n", c.grid_n},
              {"filter_order", c.filter_order},
              {"cutoff_ratio", c.cutoff_ratio},
              {"channel", c.channel},
              {"dp_max_slope", c.dp_max_slope},
              {"mean_max_iter", c.mean_max_iter},
              {"mean_tol", c.mean_tol},
              {"rolling_window_frac", c.rolling_window_frac}};
}

Json stats_json(const CohortReport& report) {
  Json skipped = Json::array();
  for (const auto& s : report.skipped) {
    skipped.push_back({{"participant_id", s.entry.participant_id}, {"trial_path", s.entry.trial_path}, {"reason", s.reason}});
  }

  Json ttests = Json::object();
  for (const auto& t : report.ttests) {
    Json entry{{"n_healthy", t.n_healthy}, {"n_patient", t.n_patient}};
    if (t.result) {
      entry["t"] = t.result->t_statistic;
      entry["p"] = t.result->p_value;
      entry["dof"] = t.result->dof;
    } else {
      entry["t"] = nullptr;
      entry["p"] = nullptr;
      entry["dof"] = nullptr;
      entry["note"] = t.note;
    }
    ttests[to_string(t.metric)] = std::move(entry);
  }

  Json regressions = Json::array();
  for (const auto& r : report.regressions) {
    Json entry{{"distance", to_string(r.distance)}, {"covariate", r.covariate}, {"n", r.n}};
    if (r.result) {
      entry["slope"] = r.result->slope;
      entry["intercept"] = r.result->intercept;
      entry["r"] = r.result->r;
      entry["p"] = r.result->p_value;
    } else {
      entry["slope"] = nullptr;
      entry["intercept"] = nullptr;
      entry["r"] = nullptr;
      entry["p"] = nullptr;
      entry["note"] = r.note;
    }
    regressions.push_back(std::move(entry));
  }

  return Json{{"config", config_json(report.config)},
              {"counts",
               {{"trials", report.records.size()},
                {"healthy", report.n_healthy},
                {"patients", report.n_patient},
                {"skipped", report.skipped.size()}}},
              {"skipped", std::move(skipped)},
              {"elastic_mean", {{"iterations", report.mean_iterations}, {"converged", report.mean_converged}}},
              {"ttests", std::move(ttests)},
              {"regressions", std::move(regressions)},
              {"rolling_window", report.rolling_window}};
}

}  // namespace

CohortReport build_report(IngestResult ingested, const PipelineConfig& config, Stage stage,
                          const PipelineOptions& options) {
  config.validate();
  CohortReport report;
  report.config = config;
  report.stage = stage;
  report.skipped = std::move(ingested.skipped);
  report.records = make_records(std::move(ingested.trials));

  std::vector<Trajectory> healthy;
  for (const auto& r : report.records) {
    if (is_patient(r.entry.cohort)) {
      ++report.n_patient;
    } else {
      ++report.n_healthy;
      healthy.push_back(r.signal);
    }
  }
  if (healthy.size() < 2) {
    throw InsufficientDataError("cannot build reference: need at least 2 healthy trials, found " +
                                std::to_string(healthy.size()));
  }

  ElasticMeanOptions mean_options{config.mean_max_iter, config.mean_tol, config.dp_max_slope};
  RegistrationResult mean = phase_amplitude_separation(healthy, mean_options);
  report.healthy_mean = Trajectory(mean.mean.grid(), {mean.mean.values().begin(), mean.mean.values().end()},
                                   TrajectoryMeta{"healthy_mean", "healthy", ""});
  report.mean_iterations = mean.iterations;
  report.mean_converged = mean.converged;
  if (stage == Stage::mean) return report;

  std::vector<Trajectory> signals;
  for (const auto& r : report.records) signals.push_back(r.signal);
  RegistrationResult aligned = align_to_reference(signals, *report.healthy_mean, config.dp_max_slope);
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    report.records[i].warp = std::move(aligned.warps[i]);
    report.records[i].aligned = std::move(aligned.aligned[i]);
  }
  if (stage == Stage::align) return report;

  const SrvfCurve& q_ref = aligned.mean_srvf;
  const TimeGrid& grid = q_ref.grid();
  for (auto& r : report.records) {
    const SrvfCurve q_aligned = group_action(to_srvf(r.signal), *r.warp);
    const double amplitude = l2_distance(q_ref.q(), q_aligned.q(), grid);
    const double cosine = options.cosine_on_srvf ? cosine_distance(q_ref.q(), q_aligned.q(), grid)
                                                 : cosine_distance(*report.healthy_mean, *r.aligned);
    r.distances = DistanceTriple(amplitude, phase_distance(*r.warp), cosine);
  }
  if (stage == Stage::distances) return report;

  for (Metric m : {Metric::amplitude, Metric::phase, Metric::cosine}) {
    report.ttests.push_back(cohort_ttest(report.records, m));
  }
  for (Metric m : {Metric::amplitude, Metric::phase}) {
    for (const char* covariate : {"brooke_score", "dynamometry"}) {
      report.regressions.push_back(covariate_regression(report.records, m, covariate));
    }
  }
  if (stage == Stage::stats) return report;

  std::vector<std::size_t> order(report.records.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cohort_rank(report.records[a].entry.cohort) < cohort_rank(report.records[b].entry.cohort);
  });
  report.matrix_pre = cosine_matrix(report.records, order, false, config.dp_max_slope);
  report.matrix_post = cosine_matrix(report.records, order, true, config.dp_max_slope);

  report.rolling_window = config.rolling_window();
  for (auto& r : report.records) {
    r.rolling = rolling_correlation(*r.aligned, *report.healthy_mean, report.rolling_window);
  }
  return report;
}

void write_report(const CohortReport& report, const std::filesystem::path& out_dir) {
  prepare_output_dir(out_dir);

  const Stage stage = report.stage;
  write_signal(*report.healthy_mean, out_dir / "mean_healthy.csv");
  if (stage == Stage::mean) return;

  write_long_table(report, out_dir / "warps.csv", "gamma", true);
  write_long_table(report, out_dir / "aligned.csv", "value", false);
  if (stage == Stage::align) return;

  write_distances(report, out_dir / "distances.csv");
  if (stage == Stage::distances) return;

  const auto stats_path = out_dir / "stats.json";
  auto out = open_output(stats_path);
  out << stats_json(report).dump(2) << '\n';
  finish(out, stats_path);
  if (stage == Stage::stats) return;

  write_matrix(*report.matrix_pre, out_dir / "matrix_pre.csv");
  write_matrix(*report.matrix_post, out_dir / "matrix_post.csv");
  write_rolling(report, out_dir / "rolling");
}

CohortReport run_pipeline(const std::filesystem::path& manifest_path, const PipelineConfig& config,
                          const std::filesystem::path& out_dir, Stage stage, const PipelineOptions& options) {
  prepare_output_dir(out_dir);
  CohortReport report = build_report(ingest(manifest_path, config, options.skip_bad), config, stage, options);
  write_report(report, out_dir);
  return report;
}

}  // namespace elastic::pipeline
