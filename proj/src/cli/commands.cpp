#include "asymloss/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "asymloss/cli/inputs.hpp"
#include "asymloss/errors.hpp"
#include "asymloss/inequality_lab.hpp"
#include "asymloss/mc_oracle.hpp"

namespace asymloss::cli {

namespace {

constexpr double kMcSigmas = 5.0;
constexpr double kSignTestFloor = 1e-3;

template <class T>
std::string shortest(T v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_long(long double v) { return shortest(v); }
std::string format_double(double v) { return shortest(v); }

void emit(const AnalysisConfig& config, const std::string& text, std::ostream& out) {
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary);
    if (!file) throw InputError("cannot write output file '" + *config.output_path + "'");
    file << text;
  } else {
    out << text;
  }
}

std::string render(const nlohmann::ordered_json& j, OutputFormat format) {
  return format == OutputFormat::json ? j.dump(2) + "\n" : flatten_to_csv(j);
}

SweepDigest digest(const lab::SweepSummary& s) {
  SweepDigest d;
  d.points = s.reports.size();
  long double min_alpha = std::numeric_limits<long double>::infinity();
  double min_beta = std::numeric_limits<double>::infinity();
  long double min_slack = std::numeric_limits<long double>::infinity();
  for (const auto& r : s.reports) {
    min_alpha = std::min(min_alpha, r.alpha);
    min_beta = std::min(min_beta, r.beta);
    if (!r.degenerate) min_slack = std::min(min_slack, r.s_of_f - r.s_of_u);
  }
  d.min_alpha = static_cast<double>(min_alpha);
  d.min_beta = min_beta;
  d.min_bound_slack = std::isinf(min_slack) ? 0.0 : static_cast<double>(min_slack);
  d.min_margin = static_cast<double>(s.min_margin);
  d.failures = s.failures;
  d.pass = s.pass;
  return d;
}

double sample_variance(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(xs.size() - 1);
}

PolicyOutcome score(std::span<const double> errors, const LossParams& k, double shift) {
  std::vector<double> losses;
  losses.reserve(errors.size());
  for (double z : errors) losses.push_back(loss(z + shift, k));
  PolicyOutcome p;
  for (double l : losses) p.total_cost += l;
  p.mean_loss = p.total_cost / static_cast<double>(losses.size());
  p.variance_loss = sample_variance(losses, p.mean_loss);
  return p;
}

}  // namespace

AnalysisOutcome run_analysis(const AnalysisConfig& config) {
  config.validate();
  AnalysisOutcome outcome;
  AnalysisReport& report = outcome.report;
  report.generated_at = timestamp(config.fixed_clock);
  report.config = config;

  std::optional<ErrorDistribution> dist;
  if (config.dist_spec) {
    dist = parse_distribution_spec(*config.dist_spec);
    report.distribution.source = "parametric";
  } else {
    const auto errors = read_errors_csv_file(*config.input_path);
    try {
      EmpiricalFit fit = fit_empirical(errors);
      report.diagnostics = fit.diagnostics;
      dist = std::move(fit.distribution);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    report.distribution.source = "csv";
  }
  const ErrorDistribution& d = *dist;
  report.distribution.descriptor = d.describe();
  report.distribution.family = d.family();
  report.distribution.scale = d.scale();

  const LossParams k(config.k1, config.k2);
  report.savings = savings_report(d, k);
  const OffsetSolution& s = report.savings.solution;
  auto& checks = report.checks;

  const auto mc0 = mc::estimate_loss_stats(d, k, 0.0, config.mc_n, config.seed);
  const auto mcc = mc::estimate_loss_stats(d, k, s.C, config.mc_n, config.seed);
  checks.push_back(make_verdict("mc_expected_at_0", "within", mc0.mean, s.expected_at_0,
                                kMcSigmas * mc0.std_error_mean));
  checks.push_back(make_verdict("mc_variance_at_0", "within", mc0.variance, s.variance_at_0,
                                kMcSigmas * mc0.std_error_variance));
  checks.push_back(make_verdict("mc_expected_at_C", "within", mcc.mean, s.expected_at_C,
                                kMcSigmas * mcc.std_error_mean));
  checks.push_back(make_verdict("mc_variance_at_C", "within", mcc.variance, s.variance_at_C,
                                kMcSigmas * mcc.std_error_variance));

  checks.push_back(make_verdict("zero_point_residual", "at_most", std::fabs(s.residual), 0.0,
                                1e-10));
  checks.push_back(
      make_verdict("critical_fractile", "within", s.cdf_at_C, s.critical_fractile, 1e-10));
  checks.push_back(
      make_verdict("expected_loss_optimal", "at_most", s.expected_at_C, s.expected_at_0, 1e-10));
  checks.push_back(
      make_verdict("variance_not_increased", "at_most", s.variance_at_C, s.variance_at_0, 1e-9));
  {
    const double ksum = k.sum();
    const double reference = ksum * ksum * s.beta_at_C;
    const double value = s.variance_at_0 - s.variance_at_C_direct;
    const double tol = 1e-8 * std::max(std::fabs(reference), std::fabs(value)) +
                       1e-12 * std::fabs(s.variance_at_0);
    checks.push_back(make_verdict("beta_identity", "within", value, reference, tol));
  }

  const ErrorDistribution family[] = {d};
  const auto summary = lab::sweep(family, lab::SweepGrid{200, 10.0, true});
  report.sweep = digest(summary);
  checks.push_back(make_verdict("inequality_sweep_margin", "at_least", report.sweep.min_margin,
                                0.0, lab::kInequalitySlack));

  bool assumption_ok = true;
  if (report.diagnostics) {
    auto v = make_verdict("sign_symmetry", "at_least", report.diagnostics->sign_test_p_value,
                          kSignTestFloor, 0.0);
    assumption_ok = v.pass;
    checks.push_back(std::move(v));
  }

  report.all_pass = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  if (!assumption_ok) outcome.exit_code = kExitAssumptionFailure;
  else if (!report.all_pass) outcome.exit_code = kExitNumericalFailure;
  return outcome;
}

SimulationOutcome run_simulation(const AnalysisConfig& config) {
  config.validate();
  std::vector<double> errors;
  if (config.dist_spec) {
    const auto d = parse_distribution_spec(*config.dist_spec);
    if (config.mc_n == 0) throw InputError("--mc-n must be positive for synthetic errors");
    errors = d.sample(config.mc_n, config.seed);
  } else {
    errors = read_errors_csv_file(*config.input_path);
  }

  SimulationOutcome outcome;
  SimulationReport& r = outcome.report;
  r.generated_at = timestamp(config.fixed_clock);
  r.k1 = config.k1;
  r.k2 = config.k2;
  r.n_train = (errors.size() + 1) / 2;
  r.n_test = errors.size() - r.n_train;
  r.split_note = "offset fitted on the first half of the series, scored on the second half";
  if (r.n_test == 0) {
    outcome.exit_code = kExitAssumptionFailure;
    r.offset_note = "test half is empty";
    return outcome;
  }

  const std::span<const double> all(errors);
  const auto train = all.first(r.n_train);
  const auto test = all.subspan(r.n_train);
  const LossParams k(config.k1, config.k2);
  const bool zero_spread =
      std::all_of(train.begin(), train.end(), [](double z) { return z == 0.0; });
  if (zero_spread) {
    r.offset = 0.0;
    r.offset_note = "training errors are all zero; the optimal offset is 0";
  } else {
    try {
      const EmpiricalFit fit = fit_empirical(train);
      r.offset = solve_offset(fit.distribution, k).C;
      r.offset_note = "offset from the symmetric monotone fit of the training errors";
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  r.uncorrected = score(test, k, 0.0);
  r.corrected = score(test, k, r.offset);
  return outcome;
}

int cmd_analyze(const AnalysisConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const AnalysisOutcome outcome = run_analysis(config);
    emit(config, render(to_json(outcome.report), config.format), out);
    if (outcome.exit_code == kExitAssumptionFailure) {
      err << "analyze: error sign test rejects symmetry (p < " << kSignTestFloor << ")\n";
    } else if (outcome.exit_code == kExitNumericalFailure) {
      err << "analyze: a numerical cross-check failed; see the checks section\n";
    }
    return outcome.exit_code;
  } catch (const NumericError& e) {
    err << "analyze: numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "analyze: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "analyze: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cmd_verify(const AnalysisConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const VerifyGrid grid = parse_grid_spec(config.grid_spec);
    std::ostringstream csv;
    csv << "distribution,x,alpha,beta,ggd_lhs,margin,pass\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    long double min_margin = std::numeric_limits<long double>::infinity();
    std::size_t points = 0;
    bool ok = true;

    if (grid.family == "ggd") {
      const auto s = lab::sweep_ggd(grid.ggd_shapes, grid.ggd_xs);
      for (const auto& r : s.reports) {
        const bool pass = r.lhs > 0.0 && r.sign_agrees;
        std::ostringstream id;
        id << "ggd:a=" << format_double(r.a);
        csv << csv_field(id.str()) << ',' << format_double(r.x) << ',' << format_long(r.alpha_matched)
            << ",," << format_double(r.lhs) << ',' << format_double(r.lhs) << ','
            << (pass ? 1 : 0) << '\n';
        rows.push_back({{"distribution", id.str()}, {"x", r.x},
                        {"alpha", static_cast<double>(r.alpha_matched)}, {"ggd_lhs", r.lhs},
                        {"margin", r.lhs}, {"pass", pass}});
        min_margin = std::min<long double>(min_margin, r.lhs);
      }
      points = s.reports.size();
      ok = s.all_positive && s.signs_agree;
    } else {
      const auto s = lab::sweep(grid.distributions, grid.grid);
      for (const auto& r : s.reports) {
        csv << csv_field(r.distribution) << ',' << format_double(r.x) << ',' << format_long(r.alpha) << ','
            << format_double(r.beta) << ',' << (r.ggd_lhs ? format_long(*r.ggd_lhs) : "")
            << ',' << format_long(r.margin) << ',' << (r.pass ? 1 : 0) << '\n';
        rows.push_back({{"distribution", r.distribution}, {"x", r.x},
                        {"alpha", static_cast<double>(r.alpha)}, {"beta", r.beta},
                        {"ggd_lhs", r.ggd_lhs ? nlohmann::ordered_json(static_cast<double>(*r.ggd_lhs))
                                              : nlohmann::ordered_json(nullptr)},
                        {"margin", static_cast<double>(r.margin)}, {"pass", r.pass}});
      }
      min_margin = s.min_margin;
      points = s.reports.size();
      ok = min_margin >= -lab::kInequalitySlack;
    }

    if (config.format == OutputFormat::json) {
      nlohmann::ordered_json j = {{"schema_version", kSchemaVersion},
                                  {"tool_version", kToolVersion},
                                  {"family", grid.family},
                                  {"points", points},
                                  {"min_margin", static_cast<double>(min_margin)},
                                  {"pass", ok},
                                  {"rows", rows}};
      emit(config, j.dump(2) + "\n", out);
    } else {
      emit(config, csv.str(), out);
    }
    err << "verify: " << points << " points, min margin " << format_long(min_margin)
        << (ok ? ", pass\n" : ", FAIL\n");
    return ok ? kExitOk : kExitNumericalFailure;
  } catch (const NumericError& e) {
    err << "verify: numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "verify: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "verify: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cmd_simulate(const AnalysisConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const SimulationOutcome outcome = run_simulation(config);
    if (outcome.exit_code == kExitAssumptionFailure) {
      err << "simulate: " << outcome.report.offset_note << '\n';
      return outcome.exit_code;
    }
    emit(config, render(to_json(outcome.report), config.format), out);
    return outcome.exit_code;
  } catch (const NumericError& e) {
    err << "simulate: numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace asymloss::cli
