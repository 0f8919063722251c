#include "asymloss/cli/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "asymloss/cli/inputs.hpp"

namespace asymloss::cli {

using nlohmann::ordered_json;

void AnalysisConfig::validate() const {
  if (input_path.has_value() == dist_spec.has_value()) {
    throw InputError("exactly one of --input or --dist is required");
  }
  if (!(k1 > 0.0) || !(k2 > 0.0) || !std::isfinite(k1) || !std::isfinite(k2)) {
    throw InputError("--k1 and --k2 must be positive");
  }
}

CheckVerdict make_verdict(std::string name, std::string relation, double value,
                          double reference, double tolerance) {
  CheckVerdict v{std::move(name), std::move(relation), value, reference, tolerance, false};
  if (v.relation == "within") {
    v.pass = std::fabs(value - reference) <= tolerance;
  } else if (v.relation == "at_most") {
    v.pass = value <= reference + tolerance;
  } else if (v.relation == "at_least") {
    v.pass = value >= reference - tolerance;
  } else {
    throw std::invalid_argument("unknown verdict relation '" + v.relation + "'");
  }
  return v;
}

namespace {

template <class T>
ordered_json optional_string(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<std::string> read_optional_string(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

ordered_json config_json(const AnalysisConfig& c) {
  return {
      {"input", optional_string(c.input_path)},
      {"dist", optional_string(c.dist_spec)},
      {"k1", c.k1},
      {"k2", c.k2},
      {"mc_n", c.mc_n},
      {"seed", c.seed},
      {"grid", c.grid_spec},
      {"out", optional_string(c.output_path)},
      {"format", c.format == OutputFormat::json ? "json" : "csv"},
      {"fixed_clock", c.fixed_clock},
  };
}

AnalysisConfig config_from_json(const ordered_json& j) {
  AnalysisConfig c;
  c.input_path = read_optional_string(j.at("input"));
  c.dist_spec = read_optional_string(j.at("dist"));
  c.k1 = j.at("k1").get<double>();
  c.k2 = j.at("k2").get<double>();
  c.mc_n = j.at("mc_n").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.grid_spec = j.at("grid").get<std::string>();
  c.output_path = read_optional_string(j.at("out"));
  c.format = j.at("format").get<std::string>() == "csv" ? OutputFormat::csv : OutputFormat::json;
  c.fixed_clock = j.at("fixed_clock").get<bool>();
  return c;
}

ordered_json diagnostics_json(const AssumptionDiagnostics& d) {
  return {
      {"n", d.n},
      {"positives", d.positives},
      {"negatives", d.negatives},
      {"zeros", d.zeros},
      {"mean_error", d.mean_error},
      {"sign_test_statistic", d.sign_test_statistic},
      {"sign_test_p_value", d.sign_test_p_value},
      {"symmetric_by_construction", d.symmetric_by_construction},
      {"monotonicity_violation_mass", d.monotonicity_violation_mass},
      {"knots", d.knots},
  };
}

AssumptionDiagnostics diagnostics_from_json(const ordered_json& j) {
  AssumptionDiagnostics d;
  d.n = j.at("n").get<std::size_t>();
  d.positives = j.at("positives").get<std::size_t>();
  d.negatives = j.at("negatives").get<std::size_t>();
  d.zeros = j.at("zeros").get<std::size_t>();
  d.mean_error = j.at("mean_error").get<double>();
  d.sign_test_statistic = j.at("sign_test_statistic").get<double>();
  d.sign_test_p_value = j.at("sign_test_p_value").get<double>();
  d.symmetric_by_construction = j.at("symmetric_by_construction").get<bool>();
  d.monotonicity_violation_mass = j.at("monotonicity_violation_mass").get<double>();
  d.knots = j.at("knots").get<std::size_t>();
  return d;
}

ordered_json solution_json(const SavingsReport& s) {
  const OffsetSolution& o = s.solution;
  return {
      {"C", o.C},
      {"critical_fractile", o.critical_fractile},
      {"cdf_at_C", o.cdf_at_C},
      {"residual", o.residual},
      {"iterations", o.iterations},
      {"multiple_minimizers", o.multiple_minimizers},
      {"expected_at_0", o.expected_at_0},
      {"variance_at_0", o.variance_at_0},
      {"expected_at_C", o.expected_at_C},
      {"variance_at_C", o.variance_at_C},
      {"variance_at_C_direct", o.variance_at_C_direct},
      {"beta_at_C", o.beta_at_C},
      {"delta_expected", s.delta_expected},
      {"delta_variance", s.delta_variance},
      {"delta_expected_pct", s.delta_expected_pct},
      {"delta_variance_pct", s.delta_variance_pct},
  };
}

SavingsReport solution_from_json(const ordered_json& j) {
  SavingsReport s;
  OffsetSolution& o = s.solution;
  o.C = j.at("C").get<double>();
  o.critical_fractile = j.at("critical_fractile").get<double>();
  o.cdf_at_C = j.at("cdf_at_C").get<double>();
  o.residual = j.at("residual").get<double>();
  o.iterations = j.at("iterations").get<int>();
  o.multiple_minimizers = j.at("multiple_minimizers").get<bool>();
  o.expected_at_0 = j.at("expected_at_0").get<double>();
  o.variance_at_0 = j.at("variance_at_0").get<double>();
  o.expected_at_C = j.at("expected_at_C").get<double>();
  o.variance_at_C = j.at("variance_at_C").get<double>();
  o.variance_at_C_direct = j.at("variance_at_C_direct").get<double>();
  o.beta_at_C = j.at("beta_at_C").get<double>();
  s.delta_expected = j.at("delta_expected").get<double>();
  s.delta_variance = j.at("delta_variance").get<double>();
  s.delta_expected_pct = j.at("delta_expected_pct").get<double>();
  s.delta_variance_pct = j.at("delta_variance_pct").get<double>();
  return s;
}

ordered_json policy_json(const PolicyOutcome& p) {
  return {{"total_cost", p.total_cost}, {"mean_loss", p.mean_loss},
          {"variance_loss", p.variance_loss}};
}

PolicyOutcome policy_from_json(const ordered_json& j) {
  return {j.at("total_cost").get<double>(), j.at("mean_loss").get<double>(),
          j.at("variance_loss").get<double>()};
}

void flatten(const ordered_json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out << prefix << ',' << csv_field(j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

ordered_json to_json(const AnalysisReport& r) {
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"relation", c.relation},
                      {"value", c.value},
                      {"reference", c.reference},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  return {
      {"schema_version", r.schema_version},
      {"tool_version", r.tool_version},
      {"generated_at", r.generated_at},
      {"config", config_json(r.config)},
      {"distribution",
       {{"descriptor", r.distribution.descriptor},
        {"family", r.distribution.family},
        {"source", r.distribution.source},
        {"scale", r.distribution.scale}}},
      {"diagnostics", r.diagnostics ? diagnostics_json(*r.diagnostics) : ordered_json(nullptr)},
      {"solution", solution_json(r.savings)},
      {"checks", checks},
      {"sweep",
       {{"points", r.sweep.points},
        {"min_alpha", r.sweep.min_alpha},
        {"min_beta", r.sweep.min_beta},
        {"min_bound_slack", r.sweep.min_bound_slack},
        {"min_margin", r.sweep.min_margin},
        {"failures", r.sweep.failures},
        {"pass", r.sweep.pass}}},
      {"all_pass", r.all_pass},
  };
}

AnalysisReport analysis_report_from_json(const ordered_json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw InputError("unsupported report schema_version");
  }
  AnalysisReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.tool_version = j.at("tool_version").get<std::string>();
  r.generated_at = j.at("generated_at").get<std::string>();
  r.config = config_from_json(j.at("config"));
  const auto& d = j.at("distribution");
  r.distribution = {d.at("descriptor").get<std::string>(), d.at("family").get<std::string>(),
                    d.at("source").get<std::string>(), d.at("scale").get<double>()};
  if (!j.at("diagnostics").is_null()) r.diagnostics = diagnostics_from_json(j.at("diagnostics"));
  r.savings = solution_from_json(j.at("solution"));
  for (const auto& c : j.at("checks")) {
    r.checks.push_back({c.at("name").get<std::string>(), c.at("relation").get<std::string>(),
                        c.at("value").get<double>(), c.at("reference").get<double>(),
                        c.at("tolerance").get<double>(), c.at("pass").get<bool>()});
  }
  const auto& s = j.at("sweep");
  r.sweep.points = s.at("points").get<std::size_t>();
  r.sweep.min_alpha = s.at("min_alpha").get<double>();
  r.sweep.min_beta = s.at("min_beta").get<double>();
  r.sweep.min_bound_slack = s.at("min_bound_slack").get<double>();
  r.sweep.min_margin = s.at("min_margin").get<double>();
  r.sweep.failures = s.at("failures").get<std::size_t>();
  r.sweep.pass = s.at("pass").get<bool>();
  r.all_pass = j.at("all_pass").get<bool>();
  return r;
}

ordered_json to_json(const SimulationReport& r) {
  return {
      {"schema_version", r.schema_version},
      {"tool_version", r.tool_version},
      {"generated_at", r.generated_at},
      {"k1", r.k1},
      {"k2", r.k2},
      {"n_train", r.n_train},
      {"n_test", r.n_test},
      {"offset", r.offset},
      {"offset_note", r.offset_note},
      {"split_note", r.split_note},
      {"uncorrected", policy_json(r.uncorrected)},
      {"corrected", policy_json(r.corrected)},
  };
}

SimulationReport simulation_report_from_json(const ordered_json& j) {
  SimulationReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.tool_version = j.at("tool_version").get<std::string>();
  r.generated_at = j.at("generated_at").get<std::string>();
  r.k1 = j.at("k1").get<double>();
  r.k2 = j.at("k2").get<double>();
  r.n_train = j.at("n_train").get<std::size_t>();
  r.n_test = j.at("n_test").get<std::size_t>();
  r.offset = j.at("offset").get<double>();
  r.offset_note = j.at("offset_note").get<std::string>();
  r.split_note = j.at("split_note").get<std::string>();
  r.uncorrected = policy_from_json(j.at("uncorrected"));
  r.corrected = policy_from_json(j.at("corrected"));
  return r;
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string quoted = "\"";
  for (char ch : v) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

std::string flatten_to_csv(const ordered_json& j) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(j, "", out);
  return out.str();
}

std::string timestamp(bool fixed) {
  if (fixed) return kFixedClock;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace asymloss::cli
