#include <charconv>
#include <map>
#include <string_view>

#include "asymloss/cli/inputs.hpp"
#include "parse_util.hpp"

namespace asymloss::cli {

ErrorDistribution parse_distribution_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InputError("distribution spec '" + spec + "' lacks a ':' after the family");
  }
  const std::string family = detail::trim(spec.substr(0, colon));
  std::map<std::string, double> params;
  for (const auto& item : detail::split(spec.substr(colon + 1), ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("expected key=value in '" + item + "'");
    const std::string key = detail::trim(item.substr(0, eq));
    if (!params.emplace(key, detail::parse_number(item.substr(eq + 1), key)).second) {
      throw InputError("parameter '" + key + "' given twice");
    }
  }
  const auto take = [&](const char* key) {
    const auto it = params.find(key);
    if (it == params.end()) throw InputError(family + " spec needs parameter '" + key + "'");
    const double v = it->second;
    params.erase(it);
    return v;
  };

  try {
    ErrorDistribution d = [&] {
      if (family == "gg") {
        const double a = take("a");
        return ErrorDistribution::generalized_gaussian(a, take("b"));
      }
      if (family == "gauss") return ErrorDistribution::gaussian(take("sigma"));
      if (family == "laplace") return ErrorDistribution::laplace(take("b"));
      if (family == "uniform") return ErrorDistribution::uniform(take("w"));
      throw InputError("unknown distribution family '" + family + "'");
    }();
    if (!params.empty()) throw InputError("unknown parameter '" + params.begin()->first + "'");
    return d;
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

}  // namespace asymloss::cli
