#include "cat5/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cat5/error.hpp"
#include "cat5/gamma_cmp.hpp"
#include "cat5/verify.hpp"

namespace cat5::cli {

namespace {

using io::json;

FiniteMetricSpace load_metric(const RunConfig& cfg) {
  if (cfg.inline_matrix) {
    std::string text = *cfg.inline_matrix;
    std::replace(text.begin(), text.end(), ';', '\n');
    return io::metric_from_csv_text(text);
  }
  if (!cfg.input) throw Error(ErrorCode::InvalidArgument, "no input given (--input or --matrix)");
  return io::parse_input(*cfg.input, cfg.format);
}

json load_json(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, 0, path.string() + ": " + e.what());
  }
}

json tolerances(const RunConfig& cfg) {
  return {{"compare", cfg.tol_compare}, {"zero", cfg.tol_zero}};
}

std::string labeling_text(const Labeling& l) {
  return "(p,q,x,y) = (" + std::to_string(l.p) + "," + std::to_string(l.q) + "," +
         std::to_string(l.x) + "," + std::to_string(l.y) + ")";
}

RunResult run_check(const RunConfig& cfg) {
  const auto space = load_metric(cfg);
  const auto rep = cat0_comparison_all(space, cfg.tol_compare);
  json j = io::to_json(rep);
  j["format_version"] = io::kFormatVersion;
  j["n"] = space.size();
  j["tolerances"] = tolerances(cfg);
  RunResult r;
  r.output = io::dump(j);
  r.exit_code = rep.holds ? kExitHolds : kExitFails;
  r.message = rep.holds ? "comparison holds on " + std::to_string(rep.labelings_checked) + " labelings"
                        : "comparison fails; witness " + labeling_text(*rep.witness) +
                              " slack " + std::to_string(rep.worst_slack);
  return r;
}

RunResult run_embed(const RunConfig& cfg) {
  const auto space = load_metric(cfg);
  Tolerances tol;
  tol.compare = cfg.tol_compare;
  tol.zero = cfg.tol_zero;
  RunResult r;
  try {
    const auto res = embed_five_points(space, tol);
    json j = io::to_json(res.complex);
    const auto& sig = res.spectrum.signature;
    j["signature"] = {{"n_pos", sig.n_pos}, {"n_zero", sig.n_zero}, {"n_neg", sig.n_neg}};
    j["eigenvalues"] = res.spectrum.eigenvalues;
    if (res.profile) j["stratum"] = res.profile->stratum();
    j["max_edge_residual"] = res.max_edge_residual;
    j["tolerances"] = tolerances(cfg);
    for (const auto& d : res.complex.diagnostics) spdlog::warn("{}", d);
    r.output = io::dump(j);
    r.exit_code = kExitHolds;
    r.message = std::string("embedded: ") + std::string(to_string(res.complex.branch));
    if (res.complex.branch == Branch::MinkowskiLowerBoundary)
      r.message += ", " + std::to_string(res.complex.facets.size()) + " lower facets";
  } catch (const ComparisonFailedError& e) {
    json j{{"format_version", io::kFormatVersion},
           {"error", "ComparisonFailed"},
           {"message", e.what()},
           {"witness", io::to_json(e.witness())},
           {"slack", e.slack()},
           {"tolerances", tolerances(cfg)}};
    r.output = io::dump(j);
    r.exit_code = kExitFails;
    r.message = std::string("comparison fails; witness ") + labeling_text(e.witness());
  }
  return r;
}

RunResult run_classify(const RunConfig& cfg) {
  if (!cfg.input) throw Error(ErrorCode::InvalidArgument, "classify needs --input with a points array");
  const auto arr = io::array_from_json(load_json(*cfg.input));
  const auto profile = classify(arr);
  json j = io::to_json(profile);
  j["format_version"] = io::kFormatVersion;
  j["structural_check"] = structural_check(arr, profile);
  RunResult r;
  r.output = io::dump(j);
  r.exit_code = kExitHolds;
  r.message = "stratum " + profile.stratum();
  return r;
}

RunResult run_gamma(const RunConfig& cfg) {
  if (!cfg.input) throw Error(ErrorCode::InvalidArgument, "gamma needs --input");
  const json in = load_json(*cfg.input);
  io::GammaInstance inst;
  if (cfg.graph) {
    inst.graph = builtin_graph(*cfg.graph);
    inst.distances = io::matrix_from_json(in.at("d"), "d");
  } else {
    inst = io::instance_from_json(in);
  }
  const auto w = gamma_feasible(inst.graph, inst.distances);
  json j = io::to_json(w);
  j["format_version"] = io::kFormatVersion;
  j["graph"] = io::to_json(inst.graph);
  RunResult r;
  r.output = io::dump(j);
  r.exit_code = w.status == GammaStatus::Feasible     ? kExitHolds
                : w.status == GammaStatus::Infeasible ? kExitFails
                                                      : kExitUndecided;
  r.message = std::string(inst.graph.name()) + ": " + std::string(to_string(w.status)) +
              " after " + std::to_string(w.iterations) + " iterations";
  return r;
}

RunResult run_verify(const RunConfig& cfg) {
  if (!cfg.complex) throw Error(ErrorCode::InvalidArgument, "verify needs --complex");
  const auto space = load_metric(cfg);
  const auto cx = io::complex_from_json(load_json(*cfg.complex));
  const auto rep = check_distance_preservation(cx, space, cfg.resolution);
  RunResult r;
  r.output = io::dump(io::to_json(rep));
  r.exit_code = rep.pass ? kExitHolds : kExitFails;
  r.message = rep.pass ? "distances preserved" : rep.failures.front();
  return r;
}

RunResult run_hunt(const RunConfig& cfg) {
  HuntConfig hc;
  if (cfg.input) hc = io::hunt_config_from_json(load_json(*cfg.input));
  if (cfg.seed) hc.seed = *cfg.seed;
  if (cfg.budget) hc.budget = *cfg.budget;
  // Config-file tolerances win unless a flag changed the default.
  if (!cfg.input || cfg.tol_compare != kDefaultCompareTol) hc.tol_compare = cfg.tol_compare;
  if (!cfg.input || cfg.tol_zero != kDefaultZeroTol) hc.tol_zero = cfg.tol_zero;
  const auto rep = hunt_counterexamples(hc, cfg.workers);
  RunResult r;
  r.output = io::dump(io::to_json(rep));
  r.exit_code = rep.hits.empty() ? kExitHolds : kExitFails;
  r.message = std::to_string(rep.hits.size()) + " hits in " + std::to_string(rep.evaluated) +
              " samples";
  return r;
}

}  // namespace

RunResult dispatch(const RunConfig& cfg) {
  try {
    if (!(cfg.tol_compare > 0.0) || !(cfg.tol_zero > 0.0))
      throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    if (cfg.resolution < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
    if (cfg.workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be positive");
    switch (cfg.command) {
      case Subcommand::Check: return run_check(cfg);
      case Subcommand::Embed: return run_embed(cfg);
      case Subcommand::Classify: return run_classify(cfg);
      case Subcommand::Gamma: return run_gamma(cfg);
      case Subcommand::Verify: return run_verify(cfg);
      case Subcommand::Hunt: return run_hunt(cfg);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand");
  } catch (const Error& e) {
    json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      j["row"] = pe->row();
      j["col"] = pe->col();
    }
    if (const auto* te = dynamic_cast<const TriangleViolationError*>(&e))
      j["triple"] = {te->i(), te->j(), te->k()};
    return {kExitError, io::dump(j), std::string(to_string(e.code())) + ": " + e.what()};
  } catch (const std::exception& e) {
    json j{{"error", "Internal"}, {"message", e.what()}};
    return {kExitError, io::dump(j), std::string("error: ") + e.what()};
  }
}

void configure_logging() {
  const char* env = std::getenv("CAT5_LOG");
  // stdout carries the JSON artifact; logs go to stderr.
  if (!spdlog::get("cat5")) spdlog::set_default_logger(spdlog::stderr_color_mt("cat5"));
  spdlog::set_level(spdlog::level::warn);
  if (env && *env) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace cat5::cli
