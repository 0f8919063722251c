#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "asymloss/cli/commands.hpp"

namespace {

using asymloss::cli::AnalysisConfig;
using asymloss::cli::OutputFormat;

struct RawOptions {
  std::string input;
  std::string dist;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, AnalysisConfig& cfg, RawOptions& raw) {
  cmd->add_option("--input", raw.input, "CSV with an `error` column or `y,yhat` columns");
  cmd->add_option("--dist", raw.dist, "gg:a=R,b=R | gauss:sigma=R | laplace:b=R | uniform:w=R");
  cmd->add_option("--k1", cfg.k1, "Cost rate for over-prediction")->capture_default_str();
  cmd->add_option("--k2", cfg.k2, "Cost rate for under-prediction")->capture_default_str();
  cmd->add_option("--mc-n", cfg.mc_n, "Monte Carlo sample count")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--out", raw.out, "Output file (default stdout)");
  cmd->add_option("--format", raw.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--fixed-clock", cfg.fixed_clock, "Use a fixed timestamp");
}

AnalysisConfig finish(AnalysisConfig cfg, const RawOptions& raw, OutputFormat fallback) {
  if (!raw.input.empty()) cfg.input_path = raw.input;
  if (!raw.dist.empty()) cfg.dist_spec = raw.dist;
  if (!raw.out.empty()) cfg.output_path = raw.out;
  cfg.format = raw.format.empty() ? fallback
               : raw.format == "csv" ? OutputFormat::csv
                                     : OutputFormat::json;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal offsets for asymmetric linear loss"};
  app.set_version_flag("--version", asymloss::cli::kToolVersion);
  app.require_subcommand(1);

  AnalysisConfig analyze_cfg, verify_cfg, simulate_cfg;
  RawOptions analyze_raw, verify_raw, simulate_raw;

  auto* analyze = app.add_subcommand("analyze", "Solve for the optimal offset and cross-check it");
  add_common(analyze, analyze_cfg, analyze_raw);

  auto* verify = app.add_subcommand("verify", "Sweep the variance inequality over a grid");
  verify->add_option("--grid", verify_cfg.grid_spec, "e.g. family=gg;a=0.25,1,4;b=1");
  verify->add_option("--out", verify_raw.out, "Output file (default stdout)");
  verify->add_option("--format", verify_raw.format, "csv or json")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* simulate = app.add_subcommand("simulate", "Train/test replay of the offset policy");
  add_common(simulate, simulate_cfg, simulate_raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : asymloss::cli::kExitInputError;
  }

  if (analyze->parsed()) {
    return asymloss::cli::cmd_analyze(finish(analyze_cfg, analyze_raw, OutputFormat::json),
                                      std::cout, std::cerr);
  }
  if (verify->parsed()) {
    return asymloss::cli::cmd_verify(finish(verify_cfg, verify_raw, OutputFormat::csv),
                                     std::cout, std::cerr);
  }
  return asymloss::cli::cmd_simulate(finish(simulate_cfg, simulate_raw, OutputFormat::json),
                                     std::cout, std::cerr);
}
