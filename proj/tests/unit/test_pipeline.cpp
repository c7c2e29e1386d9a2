#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "elastic/pipeline/config.hpp"
#include "elastic/pipeline/ingest.hpp"
#include "elastic/pipeline/manifest.hpp"
#include "elastic/pipeline/report.hpp"
#include "../support/synthetic.hpp"
#include "../support/temp_dir.hpp"

using namespace elastic;
using namespace elastic::pipeline;
using namespace elastic::testing;
namespace fs = std::filesystem;

namespace {

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

double mean_block(const DistanceMatrix& d, const std::vector<bool>& row_healthy, bool row, bool col) {
  double sum = 0;
  int count = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (i == j || row_healthy[i] != row || row_healthy[j] != col) continue;
      sum += d(i, j);
      ++count;
    }
  }
  return sum / count;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const PipelineConfig c = parse_config("");
    CHECK(c.grid_n == 101);
    CHECK(c.filter_order == 3);
    CHECK(c.cutoff_ratio == 0.1);
    CHECK(c.channel == "signal");
    CHECK(c.dp_max_slope == 7);
    CHECK(c.mean_max_iter == 20);
    CHECK(c.mean_tol == 1e-4);
    CHECK(c.rolling_window_frac == 0.1);
    CHECK(c.rolling_window() == 10);
  }
  SUBCASE("every key") {
    const PipelineConfig c = parse_config(
        "# comment\n"
        "grid_n = 51\n"
        "filter_order=2\n"
        "cutoff_ratio = 0.2   # trailing\n"
        "channel = gyro_z\n"
        "\n"
        "dp_max_slope = 5\n"
        "mean_max_iter = 7\n"
        "mean_tol = 1e-3\n"
        "rolling_window_frac = 0.5\n");
    CHECK(c.grid_n == 51);
    CHECK(c.filter_order == 2);
    CHECK(c.cutoff_ratio == 0.2);
    CHECK(c.channel == "gyro_z");
    CHECK(c.dp_max_slope == 5);
    CHECK(c.mean_max_iter == 7);
    CHECK(c.mean_tol == 1e-3);
    CHECK(c.rolling_window() == 26);
    CHECK(config_keys().size() == 8);
  }
  SUBCASE("diagnostics carry line and field") {
    const std::string bad_value = error_text([] { parse_config("grid_n = 101\ngrid_n = abc\n", "run.cfg"); });
    CHECK(contains(bad_value, "run.cfg:2"));
    CHECK(contains(bad_value, "grid_n"));
    CHECK(contains(error_text([] { parse_config("colour = red\n", "x.cfg"); }), "x.cfg:1"));
    CHECK(contains(error_text([] { parse_config("just words\n", "x.cfg"); }), "x.cfg:1"));
    CHECK_THROWS_AS(parse_config("filter_order = 0\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("cutoff_ratio = 1.0\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("grid_n = 9\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("rolling_window_frac = 0\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("mean_tol = -1\n"), ParameterError);
    CHECK(contains(error_text([] { parse_config("cutoff_ratio = 2\n"); }), "cutoff_ratio"));
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_config("/nonexistent/elastic.cfg"), IoError); }
}

TEST_CASE("manifest parsing") {
  const fs::path src = "/data/study/manifest.csv";
  SUBCASE("columns in any order, optional covariates") {
    const Manifest m = parse_manifest(
        "cohort,trial_path,participant_id,dynamometry\n"
        "healthy,a.csv,H1,12.5\n"
        "dmd,b.csv,P1,\n"
        "Sma,sub/c.csv,P2,3\n",
        src);
    REQUIRE(m.entries.size() == 3);
    CHECK(m.entries[0].participant_id == "H1");
    CHECK(m.entries[0].resolved_path == fs::path("/data/study/a.csv"));
    CHECK(m.entries[0].dynamometry == 12.5);
    CHECK(!m.entries[0].brooke_score);
    CHECK(m.entries[1].cohort == Cohort::dmd);
    CHECK(!m.entries[1].dynamometry);
    CHECK(m.entries[2].cohort == Cohort::sma);
    CHECK(m.entries[2].resolved_path == fs::path("/data/study/sub/c.csv"));
    CHECK(m.entries[2].line == 4);
  }
  SUBCASE("errors name file and line") {
    const std::string header = "participant_id,cohort,trial_path,brooke_score\n";
    CHECK(contains(error_text([&] { parse_manifest(header + "H1,healthy,a.csv,1\nH2,ALS,b.csv,1\n", src); }),
                   "manifest.csv:3"));
    CHECK(contains(error_text([&] { parse_manifest(header + "H1,healthy,a.csv,7\n", src); }), "brooke_score"));
    CHECK(contains(error_text([&] { parse_manifest(header + "H1,healthy,a.csv,1\nH1,healthy,a.csv,2\n", src); }),
                   "duplicate"));
    CHECK_NOTHROW(parse_manifest(header + "H1,healthy,a.csv,1\nH1,healthy,b.csv,1\n", src));
    CHECK_THROWS_AS(parse_manifest("participant_id,trial_path\nH1,a.csv\n", src), FormatError);
    CHECK_THROWS_AS(parse_manifest("participant_id,cohort,trial_path,dynamometry\nH1,healthy,a.csv,-2\n", src),
                    FormatError);
  }
  SUBCASE("header only") { CHECK(parse_manifest("participant_id,cohort,trial_path\n", src).entries.empty()); }
}

TEST_CASE("ingest") {
  TempDir dir("ingest");
  PipelineConfig config;

  SUBCASE("empty manifest") {
    write_text(dir / "manifest.csv", "participant_id,cohort,trial_path\n");
    CHECK_THROWS_AS(ingest(dir / "manifest.csv", config), EmptyInputError);
  }
  SUBCASE("one valid trial") {
    write_trial(dir / "t1.csv", bimodal, 3.0, 100.0);
    write_text(dir / "manifest.csv", "participant_id,cohort,trial_path\nH7,healthy,t1.csv\n");
    const IngestResult r = ingest(dir / "manifest.csv", config);
    REQUIRE(r.trials.size() == 1);
    CHECK(r.skipped.empty());
    const Trajectory& t = r.trials[0].trajectory;
    CHECK(t.meta().participant_id == "H7");
    CHECK(t.meta().cohort == "healthy");
    CHECK(t.meta().trial == "t1");
    CHECK(t.size() == 101);
    CHECK(std::abs(t[50] - bimodal(0.5)) < 0.05);
  }
  SUBCASE("shuffled rows name the offending row") {
    write_text(dir / "bad.csv", "time_s,signal\n0,1\n0.1,2\n0.3,3\n0.2,4\n0.4,5\n0.5,6\n0.6,7\n0.7,8\n");
    const std::string msg = error_text([&] { read_trial_csv(dir / "bad.csv", "signal"); });
    CHECK(contains(msg, "bad.csv:5"));
    CHECK(contains(msg, "non-monotone"));
    CHECK_THROWS_AS(read_trial_csv(dir / "bad.csv", "signal"), FormatError);
  }
  SUBCASE("missing column, short file, missing file") {
    write_text(dir / "nochan.csv", "time_s,other\n0,1\n");
    CHECK(contains(error_text([&] { read_trial_csv(dir / "nochan.csv", "signal"); }), "'signal'"));
    write_text(dir / "short.csv", "time_s,signal\n0,1\n1,2\n2,3\n");
    CHECK_THROWS_AS(read_trial_csv(dir / "short.csv", "signal"), InsufficientDataError);
    CHECK_THROWS_AS(read_trial_csv(dir / "absent.csv", "signal"), IoError);
  }
  SUBCASE("skip_bad collects failures") {
    write_trial(dir / "good.csv", bimodal, 3.0, 100.0);
    write_text(dir / "short.csv", "time_s,signal\n0,1\n1,2\n");
    write_text(dir / "manifest.csv",
               "participant_id,cohort,trial_path\nA,healthy,good.csv\nB,DMD,short.csv\nC,SMA,absent.csv\n");
    CHECK_THROWS_AS(ingest(dir / "manifest.csv", config), InsufficientDataError);
    const IngestResult r = ingest(dir / "manifest.csv", config, true);
    CHECK(r.trials.size() == 1);
    REQUIRE(r.skipped.size() == 2);
    CHECK(r.skipped[0].entry.participant_id == "B");
    CHECK(contains(r.skipped[1].reason, "absent.csv"));
  }
  SUBCASE("custom channel") {
    write_trial(dir / "g.csv", bimodal, 2.0, 100.0, "gyro_z");
    write_text(dir / "manifest.csv", "participant_id,cohort,trial_path\nA,healthy,g.csv\n");
    config.channel = "gyro_z";
    CHECK(ingest(dir / "manifest.csv", config).trials.size() == 1);
  }
}

TEST_CASE("pipeline on a planted-effect cohort") {
  TempDir dir("planted");
  const fs::path manifest = write_cohort(dir.path(), CohortSpec{});
  PipelineConfig config;
  const CohortReport report = run_pipeline(manifest, config, dir / "out");

  CHECK(report.n_healthy == 10);
  CHECK(report.n_patient == 10);
  CHECK(report.mean_converged);
  const auto& amp = report.ttests[0];
  CHECK(amp.metric == Metric::amplitude);
  REQUIRE(amp.result);
  CHECK(amp.result->p_value < 0.05);
  CHECK(amp.result->t_statistic < 0);

  std::vector<bool> healthy;
  for (const auto& l : report.matrix_post->labels()) healthy.push_back(l[0] == 'H');
  CHECK(std::is_partitioned(healthy.begin(), healthy.end(), [](bool h) { return h; }));
  CHECK(mean_block(*report.matrix_post, healthy, true, true) < mean_block(*report.matrix_post, healthy, true, false));

  for (const char* f : {"mean_healthy.csv", "warps.csv", "aligned.csv", "distances.csv", "stats.json",
                        "matrix_pre.csv", "matrix_post.csv", "rolling/H100.csv", "rolling/P109.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / "out" / f), f);
  }

  SUBCASE("stats.json round trip") {
    const auto j = nlohmann::json::parse(read_text(dir / "out/stats.json"));
    CHECK(j["counts"]["healthy"] == 10);
    CHECK(j["config"]["grid_n"] == 101);
    CHECK(j["ttests"]["amplitude"]["p"].get<double>() == doctest::Approx(amp.result->p_value).epsilon(1e-8));
    CHECK(j["regressions"].size() == 4);
    CHECK(j["rolling_window"] == 10);
  }
  SUBCASE("distances.csv lists every trial") {
    const std::string text = read_text(dir / "out/distances.csv");
    CHECK(text.rfind("participant,cohort,trial,amplitude,phase,cosine\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 21);
  }
  SUBCASE("deterministic") {
    const CohortReport again = run_pipeline(manifest, config, dir / "out2");
    for (const char* f : {"mean_healthy.csv", "warps.csv", "aligned.csv", "distances.csv", "stats.json",
                          "matrix_pre.csv", "matrix_post.csv", "rolling/P103.csv"}) {
      CHECK_MESSAGE(read_text(dir / "out" / f) == read_text(dir / "out2" / f), f);
    }
  }
}

TEST_CASE("pipeline on a null cohort") {
  TempDir dir("null");
  const fs::path manifest = write_cohort(dir.path(), CohortSpec{.null_effect = true});
  const CohortReport report = build_report(ingest(manifest, PipelineConfig{}), PipelineConfig{}, Stage::stats);
  for (const auto& t : report.ttests) {
    REQUIRE(t.result);
    CHECK_MESSAGE(t.result->p_value > 0.5, to_string(t.metric));
  }
}

TEST_CASE("pipeline errors") {
  TempDir dir("errors");
  write_trial(dir / "h.csv", bimodal, 3.0, 100.0);
  write_trial(dir / "p.csv", oscillating, 3.0, 100.0);
  write_text(dir / "manifest.csv", "participant_id,cohort,trial_path\nH1,healthy,h.csv\nP1,DMD,p.csv\n");

  SUBCASE("single healthy trial") {
    const std::string msg = error_text([&] { run_pipeline(dir / "manifest.csv", PipelineConfig{}, dir / "out"); });
    CHECK(contains(msg, "cannot build reference"));
  }
  SUBCASE("output directory is not writable") {
    write_text(dir / "blocker", "x");
    CHECK_THROWS_AS(run_pipeline(dir / "manifest.csv", PipelineConfig{}, dir / "blocker/out"), IoError);
  }
  SUBCASE("stages write only their files") {
    write_trial(dir / "h2.csv", [](double t) { return bimodal(t * t); }, 3.0, 100.0);
    write_text(dir / "manifest.csv",
               "participant_id,cohort,trial_path\nH1,healthy,h.csv\nH2,healthy,h2.csv\nP1,DMD,p.csv\n");
    run_pipeline(dir / "manifest.csv", PipelineConfig{}, dir / "mean", Stage::mean);
    CHECK(fs::exists(dir / "mean/mean_healthy.csv"));
    CHECK(!fs::exists(dir / "mean/warps.csv"));
    const CohortReport r = run_pipeline(dir / "manifest.csv", PipelineConfig{}, dir / "dist", Stage::distances);
    CHECK(fs::exists(dir / "dist/distances.csv"));
    CHECK(!fs::exists(dir / "dist/stats.json"));
    CHECK(r.records.size() == 3);
  }
}
