#pragma once

#include "asymloss/distributions.hpp"
#include "asymloss/loss_model.hpp"

namespace asymloss {

/// The shift C minimizing E[L(Z + c)] and the loss statistics on both sides
/// of the correction.
struct OffsetSolution {
  double C = 0.0;
  double expected_at_C = 0.0;
  double variance_at_C = 0.0;        // closed form specialized to the optimum
  double variance_at_C_direct = 0.0; // E[L²] − E[L]² at C
  double expected_at_0 = 0.0;
  double variance_at_0 = 0.0;
  double beta_at_C = 0.0;            // β(|C|)
  double residual = 0.0;             // zero-point equation at C
  double critical_fractile = 0.5;    // k2 / (k1 + k2)
  double cdf_at_C = 0.5;
  bool multiple_minimizers = false;  // flat cdf at the critical fractile
  int iterations = 0;

  bool operator==(const OffsetSolution&) const = default;
};

struct SavingsReport {
  OffsetSolution solution;
  double delta_expected = 0.0;
  double delta_variance = 0.0;
  double delta_expected_pct = 0.0;  // of the uncorrected baseline
  double delta_variance_pct = 0.0;

  bool operator==(const SavingsReport&) const = default;
};

/// (k1 − k2)/2 + sgn(c)(k1 + k2) ∫₀^{|c|} f.
double zero_point_residual(const ErrorDistribution& d, const LossParams& k, double c);

/// Bracketed bisection on the monotone derivative with Newton refinement.
/// Both variance routes are cross-checked; a disagreement beyond 1e-8
/// relative throws NumericError, as does a residual that misses 1e-10.
OffsetSolution solve_offset(const ErrorDistribution& d, const LossParams& k);

SavingsReport savings_report(const ErrorDistribution& d, const LossParams& k);

}  // namespace asymloss
