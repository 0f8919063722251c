#pragma once

// Gamma-family special functions.
//
// The incomplete gamma functions follow the usual split: a power series for
// the lower function when x < a + 1 and a Lentz continued fraction for the
// upper function otherwise, with the partner obtained by complementarity.
// Everything is double precision at the public surface; the *_ext overloads
// evaluate the same algorithms in long double so that deep-tail quantities
// (e^{-u} with u in the thousands) stay representable.

namespace asymloss::specfun {

/// Validated argument pair for the incomplete gamma functions.
struct GammaArgs {
  double a;  // shape, > 0
  double x;  // cut point, >= 0

  /// Throws std::domain_error unless a > 0 and x >= 0 (both finite for a).
  static GammaArgs checked(double a, double x);
};

/// Γ(a) for a > 0. Throws std::domain_error for a <= 0 and std::range_error
/// once Γ(a) overflows a double (a > ~171.6).
double gamma(double a);

/// ln Γ(a) for a > 0.
double log_gamma(double a);

/// γ(a, x) = ∫₀ˣ t^{a-1} e^{-t} dt.
double lower_incomplete(double a, double x);

/// Γ(a, x) = ∫ₓ^∞ t^{a-1} e^{-t} dt.
double upper_incomplete(double a, double x);

/// P(a, x) = γ(a, x) / Γ(a).
double regularized_lower(double a, double x);

/// Q(a, x) = Γ(a, x) / Γ(a).
double regularized_upper(double a, double x);

/// Solves P(a, x) = p for x. p must lie in [0, 1]; p = 1 gives +inf.
double inverse_regularized_lower(double a, double p);

/// Solves Q(a, x) = q for x; more accurate than the lower inverse when q is
/// small.
double inverse_regularized_upper(double a, double q);

struct RegularizedPair {
  long double p;
  long double q;
};

/// P and Q together in extended precision.
RegularizedPair regularized_pair_ext(long double a, long double x);

}  // namespace asymloss::specfun
