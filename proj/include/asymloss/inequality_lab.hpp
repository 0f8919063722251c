#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asymloss/distributions.hpp"

namespace asymloss::lab {

/// Slack tolerated on inequalities that combine several numerical integrals.
inline constexpr double kInequalitySlack = 1e-9;

// All functionals act on the half-density: the restriction of the symmetric
// f to [0, ∞), which carries mass 1/2.

/// α(x) = 4 ∫₀ˣ f ∫ₓ^∞ t f − x/2 + 2x (∫₀ˣ f)².
/// Evaluated as 4γE − 2xT² with γ = ∫₀ˣ f, T = ∫ₓ^∞ f and
/// E = ∫ₓ^∞ (t − x) f, which is algebraically identical and free of the
/// x/2 cancellation at both ends of the range.
long double alpha(const ErrorDistribution& d, double x);

/// α from its defining formula and the double MomentTable.
double alpha_direct(const ErrorDistribution& d, double x);

/// β(x), with Var[L(Z)] − Var[L(Z + C)] = (k1 + k2)² β(|C|).
double beta(const ErrorDistribution& d, double x);

struct DBetaParts {
  double alpha = 0.0;
  double second_moment_term = 0.0;  // 2 f(x) ∫₀ˣ z² f
  double first_moment_term = 0.0;   // 2 x f(x) ∫ₓ^∞ z f
  double total = 0.0;               // dβ/dx from its own formula
};

/// dβ/dx for x > 0 together with its split into α and the two extra terms.
DBetaParts d_beta(const ErrorDistribution& d, double x);

/// S(u) for the plateau function u at height f(x) that minimizes the tail
/// first moment S(g) = ∫ₓ^∞ t g(t) dt over admissible g, against S(f).
struct ExtremalBound {
  long double s_of_u = 0;
  long double s_of_f = 0;
  long double gamma = 0;           // ∫₀ˣ f
  long double x_times_density = 0; // x f(x); monotone f gives gamma >= this
  bool degenerate = false;         // f(x) = 0, where α(x) = 0 exactly
};

ExtremalBound extremal_bound(const ErrorDistribution& d, double x);

/// x^a γ(a,x)² − x^a Γ(a)² + 2 γ(a,x) Γ(2a,x), evaluated as
/// 2γ(a,x)Γ(2a,x) − x^a Γ(a,x)(Γ(a) + γ(a,x)).
double ggd_inequality_lhs(double a, double x);
long double ggd_inequality_lhs_ext(long double a, long double x);

struct InequalityReport {
  std::string distribution;
  double x = 0.0;
  long double alpha = 0;
  double beta = 0.0;
  long double s_of_u = 0;
  long double s_of_f = 0;
  long double gamma = 0;
  long double x_times_density = 0;
  bool degenerate = false;
  std::optional<long double> ggd_lhs;
  long double margin = 0;  // min slack over the checked inequalities
  bool pass = false;       // margin >= -kInequalitySlack
};

InequalityReport evaluate(const ErrorDistribution& d, double x);

struct SweepGrid {
  std::size_t points = 200;
  double span_in_scales = 10.0;  // x runs over [0, span * scale]
  bool include_zero = true;
};

/// Grid abscissae for one distribution.
std::vector<double> grid_points(const ErrorDistribution& d, const SweepGrid& grid);

struct SweepSummary {
  std::vector<InequalityReport> reports;  // ordered by (distribution, x)
  long double min_margin = 0;
  std::size_t failures = 0;
  bool pass = false;
};

/// One report per (distribution, grid point), evaluated in parallel and
/// returned in grid order. Throws std::invalid_argument for an empty grid.
SweepSummary sweep(std::span<const ErrorDistribution> family, const SweepGrid& grid,
                   unsigned workers = 0);

struct GgdReport {
  double a = 0.0;
  double x = 0.0;
  double lhs = 0.0;
  long double alpha_matched = 0;  // α of gg(a, b=1) at t = x^a
  bool sign_agrees = false;
};

struct GgdSummary {
  std::vector<GgdReport> reports;
  double min_lhs = 0.0;
  bool all_positive = false;
  bool signs_agree = false;
};

GgdSummary sweep_ggd(std::span<const double> shapes, std::span<const double> xs,
                     unsigned workers = 0);

/// n log-spaced points on [lo, hi].
std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace asymloss::lab
