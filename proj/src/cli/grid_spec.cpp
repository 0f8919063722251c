#include <map>
#include <set>

#include "asymloss/cli/inputs.hpp"
#include "parse_util.hpp"

namespace asymloss::cli {

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : detail::split(text, ',')) out.push_back(detail::parse_number(item, key));
  return out;
}

std::vector<double> positive_list(const std::map<std::string, std::string>& kv,
                                  const std::string& key, std::vector<double> fallback) {
  const auto it = kv.find(key);
  std::vector<double> values = it == kv.end() ? std::move(fallback) : parse_list(it->second, key);
  for (double v : values) {
    if (!(v > 0.0)) throw InputError("grid parameter '" + key + "' must be positive");
  }
  return values;
}

}  // namespace

VerifyGrid parse_grid_spec(const std::string& spec) {
  std::map<std::string, std::string> kv;
  if (!detail::trim(spec).empty()) {
    for (const auto& item : detail::split(spec, ';')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("grid item '" + item + "' is not key=value");
      const std::string key = detail::trim(item.substr(0, eq));
      if (!kv.emplace(key, detail::trim(item.substr(eq + 1))).second) {
        throw InputError("grid key '" + key + "' given twice");
      }
    }
  }

  VerifyGrid g;
  if (auto it = kv.find("family"); it != kv.end()) g.family = it->second;
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"gg", {"a", "b"}},       {"gauss", {"sigma"}}, {"laplace", {"b"}},
      {"uniform", {"w"}},       {"ggd", {"a", "x"}},
  };
  const auto fam = allowed.find(g.family);
  if (fam == allowed.end()) throw InputError("unknown grid family '" + g.family + "'");
  for (const auto& [key, value] : kv) {
    if (key == "family" || key == "points" || key == "span" || key == "zero") continue;
    if (!fam->second.contains(key)) {
      throw InputError("grid key '" + key + "' does not apply to family '" + g.family + "'");
    }
  }

  if (auto it = kv.find("points"); it != kv.end()) {
    const double n = detail::parse_number(it->second, "points");
    if (!(n >= 1.0) || n != static_cast<double>(static_cast<std::size_t>(n))) {
      throw InputError("grid 'points' must be a positive integer");
    }
    g.grid.points = static_cast<std::size_t>(n);
  }
  if (auto it = kv.find("span"); it != kv.end()) {
    g.grid.span_in_scales = detail::parse_number(it->second, "span");
    if (!(g.grid.span_in_scales > 0.0)) throw InputError("grid 'span' must be positive");
  }
  if (auto it = kv.find("zero"); it != kv.end()) {
    if (it->second != "0" && it->second != "1") throw InputError("grid 'zero' must be 0 or 1");
    g.grid.include_zero = it->second == "1";
  }

  if (g.family == "gg") {
    for (double a : positive_list(kv, "a", {0.25, 0.5, 1.0, 2.0, 4.0})) {
      for (double b : positive_list(kv, "b", {1.0})) {
        g.distributions.push_back(ErrorDistribution::generalized_gaussian(a, b));
      }
    }
  } else if (g.family == "gauss") {
    for (double s : positive_list(kv, "sigma", {1.0})) {
      g.distributions.push_back(ErrorDistribution::gaussian(s));
    }
  } else if (g.family == "laplace") {
    for (double b : positive_list(kv, "b", {1.0})) {
      g.distributions.push_back(ErrorDistribution::laplace(b));
    }
  } else if (g.family == "uniform") {
    for (double w : positive_list(kv, "w", {1.0, 5.0})) {
      g.distributions.push_back(ErrorDistribution::uniform(w));
    }
  } else {
    g.ggd_shapes = positive_list(kv, "a", {0.1, 0.25, 0.5, 1.0, 2.0, 5.0});
    double lo = 1e-3, hi = 20.0;
    std::size_t n = 100;
    if (auto it = kv.find("x"); it != kv.end()) {
      const auto parts = detail::split(it->second, ':');
      if (parts.size() != 3) throw InputError("grid 'x' must be lo:hi:n");
      lo = detail::parse_number(parts[0], "x lo");
      hi = detail::parse_number(parts[1], "x hi");
      const double nn = detail::parse_number(parts[2], "x n");
      if (!(lo > 0.0) || !(hi > lo) || !(nn >= 1.0) ||
          nn != static_cast<double>(static_cast<std::size_t>(nn))) {
        throw InputError("grid 'x' needs 0 < lo < hi and a positive integer count");
      }
      n = static_cast<std::size_t>(nn);
    }
    // n log-spaced points in (lo, hi].
    auto xs = lab::log_space(lo, hi, n + 1);
    g.ggd_xs.assign(xs.begin() + 1, xs.end());
  }
  return g;
}

}  // namespace asymloss::cli
