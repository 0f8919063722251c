#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymloss/distributions.hpp"
#include "asymloss/inequality_lab.hpp"

namespace asymloss::cli {

/// Malformed user input: bad flags, specs, or CSV content. Maps to exit 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses `gg:a=<r>,b=<r>` | `gauss:sigma=<r>` | `laplace:b=<r>` | `uniform:w=<r>`.
ErrorDistribution parse_distribution_spec(const std::string& spec);

/// Forecast errors z = yhat - y from CSV with a header row holding either an
/// `error` column or `y` and `yhat` columns.
std::vector<double> read_errors_csv(std::istream& in);
std::vector<double> read_errors_csv_file(const std::string& path);

/// Grid for the verify command, e.g. "family=uniform;w=1,5" or
/// "family=ggd;a=0.1,1;x=0.001:20:100". Keys: family (gg, gauss, laplace,
/// uniform, ggd; default gg), the family parameters as comma lists,
/// points=N, span=S (multiples of the scale), zero=0|1.
struct VerifyGrid {
  std::string family = "gg";
  std::vector<ErrorDistribution> distributions;
  lab::SweepGrid grid{200, 10.0, false};
  std::vector<double> ggd_shapes;
  std::vector<double> ggd_xs;
};

VerifyGrid parse_grid_spec(const std::string& spec);

}  // namespace asymloss::cli
