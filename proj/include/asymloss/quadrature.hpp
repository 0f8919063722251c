#pragma once

#include <cstddef>
#include <functional>

namespace asymloss::quad {

struct Tolerance {
  double absolute = 1e-11;
  double relative = 1e-9;
  std::size_t max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod integration over [lo, hi].
/// The interval with the largest error estimate is bisected until the total
/// error meets max(absolute, relative * |value|). Throws NumericError with
/// the achieved error when the interval budget runs out.
Result integrate(const Integrand& f, double lo, double hi, const Tolerance& tol = {});

/// ∫_lo^∞ f(t) dt through the map t = lo + s / (1 - s), s ∈ [0, 1).
Result integrate_upper_tail(const Integrand& f, double lo, const Tolerance& tol = {});

}  // namespace asymloss::quad
