#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "asymloss/quadrature.hpp"
#include "asymloss/random.hpp"

namespace asymloss {

// Density ∝ exp(-|z/b|^{1/a}); a = 1 is Laplace, a = 1/2 is Gaussian with
// sigma = b / sqrt(2).
struct GeneralizedGaussian {
  double a;
  double b;
};

struct Gaussian {
  double sigma;
};

struct Laplace {
  double b;
};

// Uniform on [-w, w].
struct Uniform {
  double w;
};

// Symmetric piecewise-constant density. knots[0] = 0 < knots[1] < ... and
// heights[j] is the density of |Z| on [knots[j], knots[j+1]), non-increasing
// and integrating to one; f(z) = heights[j] / 2.
struct EmpiricalSymmetric {
  std::vector<double> knots;
  std::vector<double> heights;
};

/// ∫₀ˣ tᵏ f(t) dt (lower) and ∫ₓ^∞ tᵏ f(t) dt (upper) for k = 0, 1, 2.
struct MomentTable {
  double x = 0.0;
  std::array<double, 3> lower{};
  std::array<double, 3> upper{};

  double total(std::size_t k) const { return lower[k] + upper[k]; }
};

/// Extended-precision quantities at a cut point x >= 0, accurate deep into
/// the tail where the double MomentTable entries underflow.
struct TailTerms {
  long double mass_below = 0;    // ∫₀ˣ f
  long double mass_above = 0;    // ∫ₓ^∞ f
  long double first_above = 0;   // ∫ₓ^∞ t f(t) dt
  long double second_below = 0;  // ∫₀ˣ t² f(t) dt
  long double excess = 0;        // ∫ₓ^∞ (t - x) f(t) dt
  long double density = 0;       // f(x)
};

/// A symmetric error density that is non-increasing on [0, ∞).
/// Immutable after construction; every query is const and thread-safe.
class ErrorDistribution {
 public:
  using Kind = std::variant<GeneralizedGaussian, Gaussian, Laplace, Uniform, EmpiricalSymmetric>;

  static ErrorDistribution generalized_gaussian(double a, double b);
  static ErrorDistribution gaussian(double sigma);
  static ErrorDistribution laplace(double b);
  static ErrorDistribution uniform(double w);
  /// Validates the shape constraints of EmpiricalSymmetric and renormalizes
  /// heights whose mass is within 1e-9 of one.
  static ErrorDistribution empirical(std::vector<double> knots, std::vector<double> heights);

  const Kind& kind() const { return kind_; }

  double pdf(double x) const;
  double cdf(double x) const;
  /// Smallest x with cdf(x) >= p. Throws std::domain_error unless 0 < p < 1.
  double quantile(double p) const;

  /// Throws std::domain_error for x < 0.
  MomentTable partial_moments(double x) const;
  TailTerms tail_terms(double x) const;

  /// One draw by inverse-cdf on the magnitude and a random sign.
  double draw(Rng& rng) const;
  /// n draws, reproducible for fixed seed. Chunked exactly like the Monte
  /// Carlo oracle so both see the same stream. Throws for n == 0.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

  /// Natural scale parameter (b, sigma, w; RMS for empirical).
  double scale() const;
  /// Distribution of λZ.
  ErrorDistribution scaled(double lambda) const;
  /// Right end of the support of |Z| (infinity when unbounded).
  double support_end() const;
  bool strictly_decreasing() const;
  bool has_finite_second_moment() const { return true; }
  /// Points where the density is not smooth, on [0, support_end()].
  std::vector<double> breakpoints() const;

  /// Round-trippable descriptor in the CLI grammar, e.g. "laplace:b=1".
  std::string describe() const;
  std::string family() const;

 private:
  explicit ErrorDistribution(Kind kind);
  // Magnitude t with P(|Z| <= t) = g for the empirical kind.
  double empirical_inverse(long double g) const;

  Kind kind_;
  // Cumulative |Z| mass at each knot (empirical only).
  std::vector<long double> cumulative_;
};

/// The same MomentTable computed by blind adaptive quadrature of pdf.
MomentTable partial_moments_by_quadrature(const ErrorDistribution& d, double x,
                                          const quad::Tolerance& tol = {});

struct AssumptionDiagnostics {
  std::size_t n = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t zeros = 0;
  double mean_error = 0.0;
  // Sign test of P(Z > 0) = 1/2 on the non-zero errors.
  double sign_test_statistic = 0.0;
  double sign_test_p_value = 1.0;
  bool symmetric_by_construction = false;
  // Mass the monotone correction moved: half the L1 distance between the
  // interpolated-ECDF density of |Z| and the fitted non-increasing density.
  double monotonicity_violation_mass = 0.0;
  std::size_t knots = 0;

  bool operator==(const AssumptionDiagnostics&) const = default;
};

struct EmpiricalFit {
  ErrorDistribution distribution;
  AssumptionDiagnostics diagnostics;
};

/// Fits a symmetric non-increasing density to forecast errors: magnitudes of
/// the pooled sample {z, -z} go through the Grenander estimator (left
/// derivative of the least concave majorant of their ECDF).
/// Throws InsufficientDataError below 30 observations and ZeroSpreadError
/// when all errors are zero.
EmpiricalFit fit_empirical(std::span<const double> errors);

/// Two-sided exact binomial sign-test p-value for `positives` successes out
/// of `trials` at probability 1/2.
double sign_test_p_value(std::size_t positives, std::size_t trials);

}  // namespace asymloss
