#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cat5/cli.hpp"

namespace {

void add_common(CLI::App* sub, cat5::cli::RunConfig& cfg, std::string& format) {
  sub->add_option("--input,-i", cfg.input, "Input file");
  sub->add_option("--format", format, "Input format for metric files")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out,-o", cfg.out, "Write the JSON artifact here instead of stdout");
  sub->add_option("--tol-compare", cfg.tol_compare, "Comparison tolerance, relative to the diameter")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol-zero", cfg.tol_zero, "Eigenvalue zero tolerance, relative")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using cat5::cli::Subcommand;
  cat5::cli::configure_logging();

  CLI::App app{"CAT(0) comparison checks and 5-point embeddings for finite metric spaces"};
  app.require_subcommand(1);
  cat5::cli::RunConfig cfg;
  std::string format;

  struct Entry {
    const char* name;
    const char* help;
    Subcommand cmd;
  };
  const Entry entries[] = {
      {"check", "(2+2) comparison over all quadruples", Subcommand::Check},
      {"embed", "Embed a 5-point space; writes complex JSON", Subcommand::Embed},
      {"classify", "Orientation profile of 5 points in R^3", Subcommand::Classify},
      {"gamma", "Graph comparison feasibility for an instance", Subcommand::Gamma},
      {"verify", "Re-check a complex file against a metric file", Subcommand::Verify},
      {"hunt", "Search random spaces for counterexample candidates", Subcommand::Hunt},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, cfg, format);
    sub->callback([&cfg, cmd = e.cmd] { cfg.command = cmd; });
    switch (e.cmd) {
      case Subcommand::Check:
      case Subcommand::Embed:
        sub->add_option("--matrix", cfg.inline_matrix, "Inline matrix: rows split by ';'");
        break;
      case Subcommand::Gamma:
        sub->add_option("--graph", cfg.graph, "Built-in graph name (C4, O3, tripod, ...)");
        break;
      case Subcommand::Verify:
        sub->add_option("--complex", cfg.complex, "Complex JSON written by embed")->required();
        sub->add_option("--resolution", cfg.resolution, "Barycentric subdivision level")
            ->check(CLI::PositiveNumber);
        break;
      case Subcommand::Hunt:
        sub->add_option("--seed", cfg.seed, "64-bit seed");
        sub->add_option("--budget", cfg.budget, "Number of samples");
        sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
        break;
      case Subcommand::Classify:
        break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cat5::cli::kExitError;
  }
  if (format == "csv") cfg.format = cat5::io::InputFormat::Csv;
  else if (format == "json") cfg.format = cat5::io::InputFormat::Json;

  const auto result = cat5::cli::dispatch(cfg);
  if (cfg.out && result.exit_code != cat5::cli::kExitError) {
    std::ofstream out(*cfg.out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << cfg.out->string() << "\n";
      return cat5::cli::kExitError;
    }
    out << result.output;
  } else {
    std::cout << result.output;
  }
  if (!result.message.empty()) std::cerr << result.message << "\n";
  return result.exit_code;
}
