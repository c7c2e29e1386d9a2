#include <cstdlib>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "../support/synthetic.hpp"
#include "../support/temp_dir.hpp"

using namespace elastic::testing;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run_cli(const TempDir& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + ELASTIC_MOTION_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_text(out), read_text(err)};
}

}  // namespace

TEST_CASE("command line") {
  TempDir dir("cli");
  const fs::path manifest = write_cohort(dir / "cohort", CohortSpec{.healthy = 3, .patients = 2});
  const std::string m = " --manifest \"" + manifest.string() + "\"";

  SUBCASE("help") { CHECK(run_cli(dir, "--help").status == 0); }
  SUBCASE("subcommand required") { CHECK(run_cli(dir, "").status != 0); }
  SUBCASE("ingest-check") {
    const CliRun r = run_cli(dir, "ingest-check" + m);
    CHECK(r.status == 0);
    CHECK(r.out.find("ingested 5 trial(s) (3 healthy, 2 patient), skipped 0") != std::string::npos);
  }
  SUBCASE("missing manifest") {
    const CliRun r = run_cli(dir, "ingest-check --manifest /nonexistent/manifest.csv");
    CHECK(r.status == 1);
    CHECK(r.err.rfind("error: ", 0) == 0);
  }
  SUBCASE("overrides reach the config") {
    const CliRun r = run_cli(dir, "stats" + m + " --out \"" + (dir / "out").string() + "\" --grid-n 61 --mean-tol 1e-3");
    REQUIRE(r.status == 0);
    const auto stats = nlohmann::json::parse(read_text(dir / "out/stats.json"));
    CHECK(stats["config"]["grid_n"] == 61);
    CHECK(stats["config"]["mean_tol"] == 1e-3);
    CHECK(!fs::exists(dir / "out/matrix_post.csv"));
  }
  SUBCASE("config file and invalid override") {
    write_text(dir / "run.cfg", "grid_n = 51\nrolling_window_frac = 0.2\n");
    const CliRun ok = run_cli(dir, "report" + m + " --config \"" + (dir / "run.cfg").string() + "\" --out \"" +
                                       (dir / "out").string() + "\"");
    REQUIRE(ok.status == 0);
    const auto stats = nlohmann::json::parse(read_text(dir / "out/stats.json"));
    CHECK(stats["config"]["grid_n"] == 51);
    CHECK(stats["rolling_window"] == 10);
    CHECK(fs::exists(dir / "out/rolling/P101.csv"));

    const CliRun bad = run_cli(dir, "mean" + m + " --out \"" + (dir / "o2").string() + "\" --filter-order 0");
    CHECK(bad.status == 1);
    CHECK(bad.err.find("filter_order") != std::string::npos);
  }
  SUBCASE("skip-bad") {
    std::ofstream(manifest, std::ios::app) << "X1,DMD,trials/missing.csv,,\n";
    CHECK(run_cli(dir, "distances" + m + " --out \"" + (dir / "out").string() + "\"").status == 1);
    const CliRun r = run_cli(dir, "distances" + m + " --skip-bad --out \"" + (dir / "out").string() + "\"");
    CHECK(r.status == 0);
    CHECK(r.err.find("skipped 1 trial(s)") != std::string::npos);
    CHECK(fs::exists(dir / "out/distances.csv"));
  }
}
