#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymloss/distributions.hpp"
#include "asymloss/offset_solver.hpp"

namespace asymloss::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kFixedClock = "1970-01-01T00:00:00Z";

enum class OutputFormat { json, csv };

struct AnalysisConfig {
  std::optional<std::string> input_path;
  std::optional<std::string> dist_spec;
  double k1 = 1.0;
  double k2 = 1.0;
  std::size_t mc_n = 1'000'000;
  std::uint64_t seed = 0;
  std::string grid_spec;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::json;
  bool fixed_clock = false;

  /// Throws InputError unless exactly one input source is set and k1, k2 > 0.
  void validate() const;

  bool operator==(const AnalysisConfig&) const = default;
};

/// One machine-checkable verdict. pass follows from the numbers:
///   within:   |value - reference| <= tolerance
///   at_most:  value <= reference + tolerance
///   at_least: value >= reference - tolerance
struct CheckVerdict {
  std::string name;
  std::string relation;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  bool operator==(const CheckVerdict&) const = default;
};

CheckVerdict make_verdict(std::string name, std::string relation, double value,
                          double reference, double tolerance);

struct DistributionInfo {
  std::string descriptor;
  std::string family;
  std::string source;  // "parametric" or "csv"
  double scale = 0.0;

  bool operator==(const DistributionInfo&) const = default;
};

struct SweepDigest {
  std::size_t points = 0;
  double min_alpha = 0.0;
  double min_beta = 0.0;
  double min_bound_slack = 0.0;  // min S(f) - S(u) over non-degenerate points
  double min_margin = 0.0;
  std::size_t failures = 0;
  bool pass = false;

  bool operator==(const SweepDigest&) const = default;
};

struct AnalysisReport {
  int schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string generated_at;
  AnalysisConfig config;
  DistributionInfo distribution;
  std::optional<AssumptionDiagnostics> diagnostics;
  SavingsReport savings;
  std::vector<CheckVerdict> checks;
  SweepDigest sweep;
  bool all_pass = false;

  bool operator==(const AnalysisReport&) const = default;
};

struct PolicyOutcome {
  double total_cost = 0.0;
  double mean_loss = 0.0;
  double variance_loss = 0.0;

  bool operator==(const PolicyOutcome&) const = default;
};

struct SimulationReport {
  int schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string generated_at;
  double k1 = 1.0;  // procurement fee per unit over-purchased
  double k2 = 1.0;  // penalty per unit short
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double offset = 0.0;
  std::string offset_note;
  std::string split_note;
  PolicyOutcome uncorrected;
  PolicyOutcome corrected;

  bool operator==(const SimulationReport&) const = default;
};

nlohmann::ordered_json to_json(const AnalysisReport& r);
AnalysisReport analysis_report_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const SimulationReport& r);
SimulationReport simulation_report_from_json(const nlohmann::ordered_json& j);

/// Quotes a CSV field when it holds a comma, quote, or newline.
std::string csv_field(const std::string& v);

/// Flattens nested JSON into `path,value` CSV rows.
std::string flatten_to_csv(const nlohmann::ordered_json& j);

/// ISO-8601 UTC timestamp, or the fixed epoch stamp when fixed is set.
std::string timestamp(bool fixed);

}  // namespace asymloss::cli
