#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "asymloss/cli/commands.hpp"
#include "asymloss/cli/inputs.hpp"
#include "asymloss/cli/report.hpp"
#include "asymloss/offset_solver.hpp"

namespace cli = asymloss::cli;
using asymloss::ErrorDistribution;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("asymloss_test_" + name)).string();
}

std::string write_errors(const std::string& name, const std::vector<double>& z) {
  const auto path = temp_path(name);
  std::ofstream out(path);
  out << "error\n";
  out.precision(17);
  for (double v : z) out << v << '\n';
  return path;
}

cli::AnalysisConfig parametric(const std::string& dist, double k1, double k2) {
  cli::AnalysisConfig c;
  c.dist_spec = dist;
  c.k1 = k1;
  c.k2 = k2;
  c.mc_n = 100'000;
  c.seed = 7;
  c.fixed_clock = true;
  return c;
}

}  // namespace

TEST_CASE("distribution specs") {
  CHECK(cli::parse_distribution_spec("laplace:b=1").describe() == "laplace:b=1");
  CHECK(cli::parse_distribution_spec("gg:a=0.5,b=2").describe() == "gg:a=0.5,b=2");
  CHECK(cli::parse_distribution_spec("gg:b=2,a=0.5").describe() == "gg:a=0.5,b=2");
  CHECK(cli::parse_distribution_spec("gauss:sigma=3").scale() == 3.0);
  CHECK(cli::parse_distribution_spec("uniform:w=5").support_end() == 5.0);
  for (const char* bad : {"", "laplace", "laplace:", "laplace:b=", "laplace:b=x", "laplace:b=-1",
                          "laplace:b=1,b=2", "laplace:b=1,c=2", "cauchy:s=1", "gg:a=1", "gauss:sigma=inf"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(cli::parse_distribution_spec(bad), cli::InputError);
  }
}

TEST_CASE("error CSV formats") {
  std::istringstream one("error\n0.5\n-1.25\n\n3\n");
  CHECK(cli::read_errors_csv(one) == std::vector<double>{0.5, -1.25, 3.0});
  std::istringstream two("\xEF\xBB\xBFy,yhat\n10,12\n5,4.5\n");
  CHECK(cli::read_errors_csv(two) == std::vector<double>{2.0, -0.5});
  std::istringstream extra("id,error\n1,0.25\n");
  CHECK(cli::read_errors_csv(extra) == std::vector<double>{0.25});

  std::istringstream empty("");
  CHECK_THROWS_AS(cli::read_errors_csv(empty), cli::InputError);
  std::istringstream no_header("1\n2\n");
  CHECK_THROWS_AS(cli::read_errors_csv(no_header), cli::InputError);
  std::istringstream bad("error\n1\nnan-ish\n");
  try {
    cli::read_errors_csv(bad);
    FAIL("expected InputError");
  } catch (const cli::InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream ragged("y,yhat\n1,2\n3\n");
  CHECK_THROWS_AS(cli::read_errors_csv(ragged), cli::InputError);
  CHECK_THROWS_AS(cli::read_errors_csv_file(temp_path("does_not_exist.csv")), cli::InputError);
}

TEST_CASE("grid specs") {
  const auto def = cli::parse_grid_spec("");
  CHECK(def.family == "gg");
  CHECK(def.distributions.size() == 5);
  const auto uni = cli::parse_grid_spec("family=uniform;w=1,5;points=50;span=3;zero=1");
  CHECK(uni.distributions.size() == 2);
  CHECK(uni.grid.points == 50);
  CHECK(uni.grid.span_in_scales == 3.0);
  CHECK(uni.grid.include_zero);
  const auto ggd_grid = cli::parse_grid_spec("family=ggd;a=0.5,2;x=0.01:10:25");
  CHECK(ggd_grid.ggd_shapes == std::vector<double>{0.5, 2.0});
  CHECK(ggd_grid.ggd_xs.size() == 25);
  CHECK(ggd_grid.ggd_xs.back() == doctest::Approx(10.0));
  for (const char* bad : {"a=-1", "family=zeta", "points=0", "points=2.5", "span=0", "zero=2",
                          "family=uniform;a=1", "a=1;a=2", "family=ggd;x=1:0.5:3", "nonsense"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(cli::parse_grid_spec(bad), cli::InputError);
  }
}

TEST_CASE("config validation") {
  cli::AnalysisConfig c;
  CHECK_THROWS_AS(c.validate(), cli::InputError);
  c.dist_spec = "laplace:b=1";
  CHECK_NOTHROW(c.validate());
  c.input_path = "x.csv";
  CHECK_THROWS_AS(c.validate(), cli::InputError);
  c.input_path.reset();
  c.k1 = 0.0;
  CHECK_THROWS_AS(c.validate(), cli::InputError);
}

TEST_CASE("analysis report round-trips through JSON") {
  const auto outcome = cli::run_analysis(parametric("laplace:b=1", 1.0, 3.0));
  CHECK(outcome.exit_code == cli::kExitOk);
  const auto& r = outcome.report;
  CHECK(r.savings.solution.C == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(r.savings.solution.variance_at_0 == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(r.all_pass);
  for (const auto& v : r.checks) CHECK(v.pass == cli::make_verdict(v.name, v.relation, v.value, v.reference, v.tolerance).pass);

  const std::string text = cli::to_json(r).dump(2);
  const auto back = cli::analysis_report_from_json(nlohmann::ordered_json::parse(text));
  CHECK(back == r);
  CHECK(cli::to_json(back).dump(2) == text);
  CHECK(nlohmann::ordered_json::parse(text).at("schema_version") == 1);
}

TEST_CASE("reports are deterministic under a fixed clock") {
  const auto cfg = parametric("gg:a=2,b=1", 2.0, 1.0);
  const auto a = cli::to_json(cli::run_analysis(cfg).report).dump(2);
  const auto b = cli::to_json(cli::run_analysis(cfg).report).dump(2);
  CHECK(a == b);
  CHECK(a.find(cli::kFixedClock) != std::string::npos);
}

TEST_CASE("equal slopes give a zero offset and no savings") {
  const auto r = cli::run_analysis(parametric("gauss:sigma=2", 1.0, 1.0)).report;
  CHECK(r.savings.solution.C == 0.0);
  CHECK(r.savings.delta_expected == 0.0);
  CHECK(r.savings.delta_variance == 0.0);
}

TEST_CASE("CSV analysis tracks the parametric answer") {
  const auto g = ErrorDistribution::gaussian(1.0);
  const auto path = write_errors("gauss.csv", g.sample(10'000, 99));
  cli::AnalysisConfig cfg;
  cfg.input_path = path;
  cfg.k1 = 1.0;
  cfg.k2 = 2.0;
  cfg.mc_n = 100'000;
  cfg.fixed_clock = true;
  const auto outcome = cli::run_analysis(cfg);
  CHECK(outcome.exit_code == cli::kExitOk);
  REQUIRE(outcome.report.diagnostics.has_value());
  CHECK(outcome.report.distribution.source == "csv");
  const double c_param = asymloss::solve_offset(g, asymloss::LossParams(1.0, 2.0)).C;
  const double p = 2.0 / 3.0;
  const double fit_error = std::sqrt(p * (1 - p) / 10'000.0) / g.pdf(c_param);
  CHECK(std::fabs(outcome.report.savings.solution.C - c_param) <= 3.0 * fit_error);

  const auto text = cli::to_json(outcome.report).dump();
  CHECK(cli::analysis_report_from_json(nlohmann::ordered_json::parse(text)) == outcome.report);
  std::remove(path.c_str());
}

TEST_CASE("analyze exit codes") {
  std::ostringstream out, err;
  CHECK(cli::cmd_analyze(parametric("laplace:b=1", 1.0, 3.0), out, err) == cli::kExitOk);
  CHECK(cli::cmd_analyze(parametric("laplace:b=0", 1.0, 3.0), out, err) == cli::kExitInputError);
  CHECK(cli::cmd_analyze(parametric("laplace:b=1", -1.0, 3.0), out, err) == cli::kExitInputError);

  std::vector<double> skewed;
  for (int i = 0; i < 200; ++i) skewed.push_back(i % 10 == 0 ? -1.0 : 0.5 + 0.01 * i);
  const auto path = write_errors("skewed.csv", skewed);
  cli::AnalysisConfig cfg;
  cfg.input_path = path;
  cfg.mc_n = 10'000;
  cfg.fixed_clock = true;
  std::ostringstream out2;
  CHECK(cli::cmd_analyze(cfg, out2, err) == cli::kExitAssumptionFailure);
  CHECK(out2.str().find("\"sign_symmetry\"") != std::string::npos);
  std::remove(path.c_str());

  cli::AnalysisConfig missing;
  missing.input_path = temp_path("missing.csv");
  CHECK(cli::cmd_analyze(missing, out, err) == cli::kExitInputError);
}

TEST_CASE("csv output flattens the report") {
  auto cfg = parametric("laplace:b=1", 1.0, 3.0);
  cfg.format = cli::OutputFormat::csv;
  std::ostringstream out, err;
  CHECK(cli::cmd_analyze(cfg, out, err) == cli::kExitOk);
  const std::string s = out.str();
  CHECK(s.rfind("key,value\n", 0) == 0);
  CHECK(s.find("\nsolution.C,0.693147180559945") != std::string::npos);
  CHECK(cli::csv_field("a,b") == "\"a,b\"");
  CHECK(cli::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("verify command") {
  std::ostringstream out, err;
  cli::AnalysisConfig cfg;
  cfg.format = cli::OutputFormat::csv;
  cfg.grid_spec = "family=uniform";
  CHECK(cli::cmd_verify(cfg, out, err) == cli::kExitOk);
  std::istringstream rows(out.str());
  std::string line;
  std::getline(rows, line);
  CHECK(line == "distribution,x,alpha,beta,ggd_lhs,margin,pass");
  std::size_t n = 0;
  while (std::getline(rows, line)) {
    ++n;
    const auto alpha = std::stod(line.substr(line.find(',', line.find(',') + 1) + 1));
    CHECK(std::fabs(alpha) <= 1e-9);
  }
  CHECK(n == 400);

  std::ostringstream gg_out;
  cfg.grid_spec = "family=gg;a=0.25,0.5,1,2,4";
  CHECK(cli::cmd_verify(cfg, gg_out, err) == cli::kExitOk);
  cfg.grid_spec = "family=ggd";
  CHECK(cli::cmd_verify(cfg, out, err) == cli::kExitOk);
  cfg.grid_spec = "a=-1";
  CHECK(cli::cmd_verify(cfg, out, err) == cli::kExitInputError);
  cfg.grid_spec = "family=laplace;b=1";
  cfg.format = cli::OutputFormat::json;
  std::ostringstream js;
  CHECK(cli::cmd_verify(cfg, js, err) == cli::kExitOk);
  CHECK(nlohmann::ordered_json::parse(js.str()).at("rows").size() == 200);
}

TEST_CASE("simulate command") {
  cli::AnalysisConfig cfg;
  cfg.dist_spec = "laplace:b=1";
  cfg.k1 = 1.0;
  cfg.k2 = 3.0;
  cfg.mc_n = 100'000;
  cfg.seed = 3;
  cfg.fixed_clock = true;
  const auto sim = cli::run_simulation(cfg);
  CHECK(sim.exit_code == cli::kExitOk);
  CHECK(sim.report.n_train == 50'000);
  CHECK(sim.report.n_test == 50'000);
  CHECK(sim.report.offset == doctest::Approx(std::log(2.0)).epsilon(0.05));
  CHECK(sim.report.corrected.variance_loss < sim.report.uncorrected.variance_loss);
  CHECK(sim.report.corrected.mean_loss < sim.report.uncorrected.mean_loss);
  const auto text = cli::to_json(sim.report).dump();
  CHECK(cli::simulation_report_from_json(nlohmann::ordered_json::parse(text)) == sim.report);

  cfg.k2 = 1.0;
  const auto even = cli::run_simulation(cfg);
  CHECK(even.report.offset == 0.0);
  CHECK(even.report.corrected == even.report.uncorrected);

  cli::AnalysisConfig zeros;
  zeros.input_path = write_errors("zeros.csv", std::vector<double>(40, 0.0));
  zeros.k2 = 5.0;
  const auto z = cli::run_simulation(zeros);
  CHECK(z.report.offset == 0.0);
  CHECK(z.report.uncorrected.total_cost == 0.0);
  CHECK(z.report.corrected.total_cost == 0.0);
  std::remove(zeros.input_path->c_str());

  std::ostringstream out, err;
  cli::AnalysisConfig single;
  single.input_path = write_errors("single.csv", {1.0});
  CHECK(cli::cmd_simulate(single, out, err) == cli::kExitAssumptionFailure);
  std::remove(single.input_path->c_str());

  cli::AnalysisConfig bad;
  bad.input_path = temp_path("bad.csv");
  {
    std::ofstream f(*bad.input_path);
    f << "y,yhat\n1,oops\n";
  }
  CHECK(cli::cmd_simulate(bad, out, err) == cli::kExitInputError);
  std::remove(bad.input_path->c_str());
}
