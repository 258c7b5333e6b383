#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cat5/cli.hpp"
#include "cat5/io.hpp"
#include "cat5/verify.hpp"
#include "oracles.hpp"

using namespace cat5;
using io::json;

namespace {

std::filesystem::path scratch_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("cat5_test_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

cli::RunResult run(cli::Subcommand cmd, const std::filesystem::path& input) {
  cli::RunConfig cfg;
  cfg.command = cmd;
  cfg.input = input;
  return cli::dispatch(cfg);
}

}  // namespace

TEST_CASE("metric input parsing") {
  SUBCASE("JSON two-point space") {
    const auto s = io::metric_from_json_text(R"({"n": 2, "d": [[0, 1.5], [1.5, 0]]})");
    CHECK(s.size() == 2);
    CHECK(s(0, 1) == 1.5);
  }
  SUBCASE("CSV with a non-numeric field") {
    try {
      io::metric_from_csv_text("0,1,1\n1,0,abc\n1,1,0\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
      CHECK(e.col() == 3);
    }
  }
  SUBCASE("CSV round values") {
    const auto s = io::metric_from_csv_text("0,3\n3,0\n");
    CHECK(s(1, 0) == 3.0);
  }
  SUBCASE("JSON errors") {
    CHECK(oracle::error_of([] { io::metric_from_json_text(R"({"n": 3, "d": [[0, 1], [1, 0]]})"); }) ==
          ErrorCode::ParseError);
    CHECK(oracle::error_of([] { io::metric_from_json_text("{\"n\": 2,\n \"d\": [[0, 1], [1, 0]"); }) ==
          ErrorCode::ParseError);
  }
  SUBCASE("validation errors pass through") {
    CHECK(oracle::error_of([] { io::metric_from_csv_text("0,1,5\n1,0,1\n5,1,0\n"); }) ==
          ErrorCode::TriangleViolation);
  }
  SUBCASE("shipped tripod-extension fixture") {
    const auto s = io::parse_input(oracle::fixture("tripod_extension.json"));
    CHECK(s.size() == 5);
    CHECK(cat0_comparison_all(s).holds);
  }
  SUBCASE("CSV selected by extension") {
    const auto p = scratch_file("m.csv", "0,2\n2,0\n");
    CHECK(io::parse_input(p)(0, 1) == 2.0);
  }
}

TEST_CASE("JSON artifacts round-trip through their parsers") {
  SUBCASE("complex") {
    for (const char* f : {"tripod_extension.json", "euclidean_5.json"}) {
      const auto r = embed_five_points(io::parse_input(oracle::fixture(f)));
      const json j = io::to_json(r.complex);
      const auto back = io::complex_from_json(json::parse(io::dump(j)));
      CHECK(io::to_json(back) == j);
    }
  }
  SUBCASE("profile") {
    const auto arr = io::array_from_json(json::parse(io::read_file(oracle::fixture("stratum_1_1_3.json"))));
    const auto p = classify(arr);
    CHECK(io::to_json(io::profile_from_json(io::to_json(p))) == io::to_json(p));
    CHECK(io::to_json(io::array_from_json(io::to_json(arr))) == io::to_json(arr));
  }
  SUBCASE("witness and graph") {
    const auto inst = io::instance_from_json(json::parse(io::read_file(oracle::fixture("octahedron.json"))));
    const auto w = gamma_feasible(inst.graph, inst.distances);
    CHECK(io::to_json(io::witness_from_json(io::to_json(w))) == io::to_json(w));
    CHECK(io::to_json(io::graph_from_json(io::to_json(inst.graph))) == io::to_json(inst.graph));
  }
  SUBCASE("hunt config") {
    const auto c = io::hunt_config_from_json(json::parse(io::read_file(oracle::fixture("hunt_neg2.json"))));
    CHECK(io::to_json(io::hunt_config_from_json(io::to_json(c))) == io::to_json(c));
    CHECK(oracle::error_of([] { io::hunt_config_from_json(json{{"budget", 0}}); }) == ErrorCode::ParseError);
  }
}

TEST_CASE("dispatch exit codes and artifacts") {
  cli::configure_logging();
  SUBCASE("embed on the Euclidean fixture") {
    const auto r = run(cli::Subcommand::Embed, oracle::fixture("euclidean_5.json"));
    CHECK(r.exit_code == cli::kExitHolds);
    const auto j = json::parse(r.output);
    CHECK(j["branch"] == "Euclidean_full_simplex");
    CHECK(j["format_version"] == io::kFormatVersion);
    CHECK(j["tolerances"]["compare"] == kDefaultCompareTol);
    CHECK(io::to_json(io::complex_from_json(j))["vertices"] == j["vertices"]);
  }
  SUBCASE("check on the failing-quadruple fixture") {
    const auto r = run(cli::Subcommand::Check, oracle::fixture("failing_quadruple.json"));
    CHECK(r.exit_code == cli::kExitFails);
    const auto j = json::parse(r.output);
    CHECK(j.contains("witness"));
    CHECK(r.message.find("witness") != std::string::npos);
  }
  SUBCASE("embed on the failing-quadruple fixture") {
    const auto r = run(cli::Subcommand::Embed, oracle::fixture("failing_quadruple.json"));
    CHECK(r.exit_code == cli::kExitFails);
    CHECK(json::parse(r.output)["error"] == "ComparisonFailed");
  }
  SUBCASE("gamma on the octahedron fixture") {
    const auto r = run(cli::Subcommand::Gamma, oracle::fixture("octahedron.json"));
    CHECK(r.exit_code == cli::kExitHolds);
    CHECK(json::parse(r.output)["status"] == "Feasible");
  }
  SUBCASE("gamma with a named graph") {
    cli::RunConfig cfg;
    cfg.command = cli::Subcommand::Gamma;
    cfg.input = scratch_file("c4.json", R"({"d": [[0,1,1,1],[1,0,1,2],[1,1,0,1],[1,2,1,0]]})");
    cfg.graph = "C4";
    CHECK(cli::dispatch(cfg).exit_code == cli::kExitFails);
  }
  SUBCASE("classify") {
    const auto r = run(cli::Subcommand::Classify, oracle::fixture("stratum_2_1_2.json"));
    CHECK(r.exit_code == cli::kExitHolds);
    const auto j = json::parse(r.output);
    CHECK(j["m"] == 0);
    CHECK(j["structural_check"] == true);
  }
  SUBCASE("verify a complex written by embed") {
    const auto e = run(cli::Subcommand::Embed, oracle::fixture("tripod_extension.json"));
    REQUIRE(e.exit_code == cli::kExitHolds);
    cli::RunConfig cfg;
    cfg.command = cli::Subcommand::Verify;
    cfg.input = oracle::fixture("tripod_extension.json");
    cfg.complex = scratch_file("complex.json", e.output);
    const auto r = cli::dispatch(cfg);
    CHECK(r.exit_code == cli::kExitHolds);
    CHECK(json::parse(r.output)["pass"] == true);
  }
  SUBCASE("hunt with seed and budget overrides") {
    cli::RunConfig cfg;
    cfg.command = cli::Subcommand::Hunt;
    cfg.input = oracle::fixture("hunt_neg2.json");
    cfg.budget = 50;
    cfg.seed = 3;
    cfg.workers = 2;
    const auto a = cli::dispatch(cfg);
    CHECK(a.exit_code == cli::kExitHolds);
    CHECK(json::parse(a.output)["evaluated"] == 50);
    cfg.workers = 1;
    CHECK(cli::dispatch(cfg).output == a.output);
  }
  SUBCASE("errors are structured with exit code 2") {
    const auto missing = run(cli::Subcommand::Check, "/nonexistent/metric.json");
    CHECK(missing.exit_code == cli::kExitError);
    CHECK(json::parse(missing.output).contains("error"));

    cli::RunConfig cfg;
    cfg.command = cli::Subcommand::Check;
    cfg.input = scratch_file("bad.csv", "0,1\nx,0\n");
    const auto bad = cli::dispatch(cfg);
    CHECK(bad.exit_code == cli::kExitError);
    const auto j = json::parse(bad.output);
    CHECK(j["error"] == "ParseError");
    CHECK(j["row"] == 2);
    CHECK(j["col"] == 1);

    cfg.input = oracle::fixture("euclidean_5.json");
    cfg.tol_compare = -1;
    CHECK(cli::dispatch(cfg).exit_code == cli::kExitError);
  }
  SUBCASE("identical inputs give byte-identical outputs") {
    for (auto cmd : {cli::Subcommand::Check, cli::Subcommand::Embed}) {
      const auto a = run(cmd, oracle::fixture("tripod_extension.json"));
      const auto b = run(cmd, oracle::fixture("tripod_extension.json"));
      CHECK(a.output == b.output);
    }
  }
}
