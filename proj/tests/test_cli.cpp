// Drives the installed CLI binary end to end: exit codes, JSON output,
// determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "core/ingest.hpp"
#include "test_support.hpp"

using json = nlohmann::json;
using testsupport::TempDir;
using testsupport::wrap;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args, const TempDir& tmp, const std::string& tag) {
  const std::string out_path = tmp.path("stdout_" + tag);
  const std::string cmd =
      std::string(RG_CLI_PATH) + " " + args + " > " + out_path + " 2> /dev/null";
  const int raw = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(raw);
  result.stdout_text = testsupport::read_bytes(out_path);
  return result;
}

}  // namespace

TEST_CASE("compute on a stored identity matrix") {
  TempDir tmp("cli_compute");
  rankgauge::write_npy(wrap(Eigen::MatrixXd::Identity(4, 4)), tmp.path("id.npy"),
                       rankgauge::Dtype::F64);

  const RunResult r =
      run_cli("compute " + tmp.path("id.npy") + " --epsilon 0", tmp, "id");
  REQUIRE(r.exit_code == 0);

  const json report = json::parse(r.stdout_text);
  CHECK(report["command"] == "compute");
  CHECK(report["outputs"]["rankme"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(report["outputs"]["classical_rank"] == 4);
  CHECK(report["outputs"]["n_used"] == 4);
  CHECK(report["outputs"]["config"]["samples"] == 25600);
  CHECK(report["tool_version"] == "0.1.0");
  CHECK(!report.contains("timing_ms"));
}

TEST_CASE("compute output is byte-identical across runs") {
  TempDir tmp("cli_det");
  rankgauge::write_npy(wrap(testsupport::random_gaussian(40, 6, 3)),
                       tmp.path("m.npy"), rankgauge::Dtype::F32);

  const std::string args = "compute " + tmp.path("m.npy") + " --samples 2 --seed 7";
  const RunResult a = run_cli(args, tmp, "a");
  const RunResult b = run_cli(args, tmp, "b");
  REQUIRE(a.exit_code == 0);
  CHECK(a.stdout_text == b.stdout_text);
  CHECK(!a.stdout_text.empty());
}

TEST_CASE("compute with alpha on csv input") {
  TempDir tmp("cli_alpha");
  std::string csv;
  testsupport::Gaussian g(19);
  for (int i = 0; i < 50; ++i) {
    csv += std::to_string(g()) + "," + std::to_string(g()) + "," + std::to_string(g()) + "\n";
  }
  testsupport::write_bytes(tmp.path("e.csv"), csv);

  const RunResult r = run_cli(
      "compute " + tmp.path("e.csv") + " --format csv --alpha", tmp, "alpha");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["outputs"].contains("alpha"));
  CHECK(report["outputs"]["alpha"].get<double>() >= 0.0);
  CHECK(report["outputs"]["config"]["centered"] == true);
}

TEST_CASE("compute accepts the raw sidecar format") {
  TempDir tmp("cli_raw");
  const float payload[8] = {1, 0, 0, 1, 1, 0, 0, 1};
  testsupport::write_bytes(
      tmp.path("e.bin"), std::string(reinterpret_cast<const char*>(payload), sizeof(payload)));
  testsupport::write_bytes(tmp.path("e.bin.json"), R"({"shape": [4, 2], "dtype": "f32"})");

  const RunResult r =
      run_cli("compute " + tmp.path("e.bin") + " --format raw --epsilon 0", tmp, "raw");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["outputs"]["classical_rank"] == 2);
  CHECK(report["outputs"]["n_rows"] == 4);
  CHECK(report["outputs"]["config"]["threshold_epsilon"].get<double>() == 1e-7);
}

TEST_CASE("compute recovers a planted rank") {
  TempDir tmp("cli_planted");
  rankgauge::write_npy(wrap(testsupport::planted_rank(100, 10, 3, 64)),
                       tmp.path("r3.npy"), rankgauge::Dtype::F32);

  const RunResult r = run_cli("compute " + tmp.path("r3.npy") + " --epsilon 0", tmp, "r3");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["outputs"]["classical_rank"] == 3);
  const double rm = report["outputs"]["rankme"].get<double>();
  CHECK(rm >= 2.5);
  CHECK(rm <= 3.0001);
}

TEST_CASE("exit codes partition the documented error classes") {
  TempDir tmp("cli_exit");

  SUBCASE("ingest errors exit 1") {
    testsupport::write_bytes(tmp.path("junk.npy"), "not an npy at all");
    CHECK(run_cli("compute " + tmp.path("junk.npy"), tmp, "magic").exit_code == 1);
  }

  SUBCASE("numeric failures exit 2") {
    // A constant matrix centers to an all-zero covariance spectrum: no
    // positive eigenvalues for the power-law fit.
    rankgauge::write_npy(wrap(Eigen::MatrixXd::Zero(8, 4)), tmp.path("zero.npy"),
                         rankgauge::Dtype::F64);
    CHECK(run_cli("compute " + tmp.path("zero.npy") + " --alpha", tmp, "alpha").exit_code == 2);
  }

  SUBCASE("missing alpha inputs exit 3") {
    CHECK(run_cli("select " + testsupport::fixture("vicreg_cov_sweep.json") +
                      " --strategy alpha",
                  tmp, "noalpha")
              .exit_code == 3);
  }

  SUBCASE("empty manifest exits 1") {
    testsupport::write_bytes(tmp.path("empty.json"),
                             R"({"axis_name": "x", "ordered": false, "runs": []})");
    CHECK(run_cli("select " + tmp.path("empty.json"), tmp, "empty").exit_code == 1);
  }

  SUBCASE("unsorted converge sizes exit 1") {
    rankgauge::write_npy(wrap(testsupport::random_gaussian(30, 4, 8)),
                         tmp.path("m.npy"), rankgauge::Dtype::F64);
    CHECK(run_cli("converge " + tmp.path("m.npy") + " --sizes 20,10", tmp, "sizes").exit_code ==
          1);
  }
}

TEST_CASE("select replays the published sweep") {
  TempDir tmp("cli_select");
  const RunResult r =
      run_cli("select " + testsupport::fixture("vicreg_cov_sweep.json"), tmp, "sweep");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["outputs"]["chosen_run_id"] == "vicreg-cov-11");
  CHECK(report["outputs"]["chosen_rank"].get<double>() == doctest::Approx(1938.44));
  CHECK(report["outputs"]["trace"].size() == 12);
  CHECK(report["outputs"]["trace"][0]["decision"] == "kept_initial");
}

TEST_CASE("select computes missing ranks from embeddings") {
  TempDir tmp("cli_select_compute");
  // Two runs shipped as matrices: rank-1 and full-rank 3.
  Eigen::MatrixXd low = Eigen::MatrixXd::Zero(20, 3);
  low.col(0).setOnes();
  rankgauge::write_npy(wrap(low), tmp.path("low.npy"), rankgauge::Dtype::F64);
  rankgauge::write_npy(wrap(testsupport::random_gaussian(20, 3, 12)),
                       tmp.path("high.npy"), rankgauge::Dtype::F64);

  const std::string manifest = R"({
    "axis_name": "lr", "ordered": true,
    "runs": [
      {"run_id": "low",  "hp_value": 0.1, "embeddings_path": "low.npy"},
      {"run_id": "high", "hp_value": 0.2, "embeddings_path": "high.npy"}
    ]})";
  testsupport::write_bytes(tmp.path("manifest.json"), manifest);

  const RunResult r = run_cli("select " + tmp.path("manifest.json"), tmp, "computed");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["outputs"]["chosen_run_id"] == "high");
  CHECK(report["outputs"]["chosen_rank"].get<double>() > 2.0);
}

TEST_CASE("select fits alpha from embeddings when asked") {
  TempDir tmp("cli_select_alpha");
  // Columns scaled to give covariance eigenvalues ~ j^-alpha; the flat run
  // decays far from 1, the other sits near it.
  auto planted_decay = [](double alpha, std::uint64_t seed) {
    Eigen::MatrixXd m = testsupport::random_gaussian(4000, 8, seed);
    for (int j = 0; j < 8; ++j) {
      m.col(j) *= std::pow(static_cast<double>(j + 1), -alpha / 2.0);
    }
    return m;
  };
  rankgauge::write_npy(wrap(planted_decay(0.2, 71)), tmp.path("flat.npy"),
                       rankgauge::Dtype::F64);
  rankgauge::write_npy(wrap(planted_decay(1.0, 72)), tmp.path("steep.npy"),
                       rankgauge::Dtype::F64);

  const std::string manifest = R"({
    "axis_name": "temperature", "ordered": true,
    "runs": [
      {"run_id": "flat",  "hp_value": 0.1, "embeddings_path": "flat.npy"},
      {"run_id": "steep", "hp_value": 0.2, "embeddings_path": "steep.npy"}
    ]})";
  testsupport::write_bytes(tmp.path("manifest.json"), manifest);

  const RunResult r =
      run_cli("select " + tmp.path("manifest.json") + " --strategy alpha", tmp, "alpha");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["outputs"]["chosen_run_id"] == "steep");
  CHECK(report["outputs"]["strategy"] == "alpha");
}

TEST_CASE("select applies clip caps before tie-breaking") {
  TempDir tmp("cli_clip");
  const std::string manifest = R"({
    "axis_name": "weight", "ordered": true,
    "runs": [
      {"run_id": "r0", "hp_value": 1, "rank": 2400, "clip_cap": 2048},
      {"run_id": "r1", "hp_value": 2, "rank": 2100, "clip_cap": 2048},
      {"run_id": "r2", "hp_value": 3, "rank": 1900, "clip_cap": 2048}
    ]})";
  testsupport::write_bytes(tmp.path("clip.json"), manifest);

  const RunResult r = run_cli("select " + tmp.path("clip.json"), tmp, "clip");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["outputs"]["chosen_run_id"] == "r1");
  CHECK(report["outputs"]["chosen_rank"] == 2048.0);
  CHECK(report["outputs"]["trace"][1]["decision"] == "replaced_by_tiebreak");
}

TEST_CASE("converge emits a curve") {
  TempDir tmp("cli_converge");
  rankgauge::write_npy(wrap(testsupport::random_gaussian(200, 8, 31)),
                       tmp.path("m.npy"), rankgauge::Dtype::F64);

  SUBCASE("json report") {
    const RunResult r =
        run_cli("converge " + tmp.path("m.npy") + " --sizes 50,200", tmp, "json");
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.stdout_text);
    CHECK(report["outputs"]["sample_sizes"] == json::array({50, 200}));
    CHECK(report["outputs"]["rankme_values"].size() == 2);
    CHECK(report["outputs"]["rankme_values"][1] == report["outputs"]["full_value"]);
  }

  SUBCASE("csv to stdout") {
    const RunResult r = run_cli(
        "converge " + tmp.path("m.npy") + " --sizes 50,200 --out -", tmp, "csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.rfind("size,rankme\n", 0) == 0);
  }

  SUBCASE("csv to file plus json") {
    const RunResult r = run_cli("converge " + tmp.path("m.npy") +
                                    " --sizes 50 --out " + tmp.path("curve.csv"),
                                tmp, "file");
    REQUIRE(r.exit_code == 0);
    const std::string csv = testsupport::read_bytes(tmp.path("curve.csv"));
    CHECK(csv.rfind("size,rankme\n", 0) == 0);
    CHECK(csv.find("200,") != std::string::npos);  // full row appended
  }
}

TEST_CASE("correlate reproduces the rank-transfer fixture") {
  TempDir tmp("cli_correlate");
  const RunResult r =
      run_cli("correlate " + testsupport::fixture("vicreg_rank_transfer.csv"), tmp, "fix");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["outputs"]["n_pairs"] == 12);
  CHECK(report["outputs"]["pearson_r"].get<double>() > 0.99);

  SUBCASE("constant column exits 1") {
    testsupport::write_bytes(tmp.path("flat.csv"), "label,x,y\na,1,2\nb,1,3\nc,1,4\n");
    CHECK(run_cli("correlate " + tmp.path("flat.csv"), tmp, "flat").exit_code == 1);
  }
}

TEST_CASE("timing only appears when requested") {
  TempDir tmp("cli_timing");
  rankgauge::write_npy(wrap(Eigen::MatrixXd::Identity(3, 3)), tmp.path("m.npy"),
                       rankgauge::Dtype::F64);
  const RunResult with = run_cli("--timing compute " + tmp.path("m.npy"), tmp, "with");
  REQUIRE(with.exit_code == 0);
  CHECK(json::parse(with.stdout_text).contains("timing_ms"));
}
