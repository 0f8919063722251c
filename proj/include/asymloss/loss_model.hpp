#pragma once

#include "asymloss/distributions.hpp"

namespace asymloss {

/// Penalty slopes of the asymmetric linear loss: k1 per unit of
/// over-prediction (z >= 0), k2 per unit of under-prediction (z < 0).
class LossParams {
 public:
  /// Throws std::invalid_argument unless both slopes are positive and finite.
  LossParams(double k1, double k2);

  double k1() const { return k1_; }
  double k2() const { return k2_; }
  double sum() const { return k1_ + k2_; }
  /// k2 / (k1 + k2): the cdf level at the optimal shift.
  double critical_fractile() const { return k2_ / (k1_ + k2_); }

  bool operator==(const LossParams&) const = default;

 private:
  double k1_;
  double k2_;
};

/// sgn with sgn(0) = +1.
inline double sign_nonneg(double c) { return c >= 0.0 ? 1.0 : -1.0; }

struct ShiftedLossStats {
  double c = 0.0;
  double expected = 0.0;
  double expected_sq = 0.0;
  double variance = 0.0;
};

/// L(z) = k1 z for z >= 0 and -k2 z for z < 0.
double loss(double z, const LossParams& k);

// The functionals below are the closed forms in |c| built from one
// MomentTable, so E[L(Z+c)] and E[L(Z+c)^2] share a single moment evaluation.

double expected_loss(const ErrorDistribution& d, const LossParams& k, double c);
double expected_loss_sq(const ErrorDistribution& d, const LossParams& k, double c);
/// Throws std::domain_error if the distribution lacks a second moment.
double variance_of_loss(const ErrorDistribution& d, const LossParams& k, double c);
ShiftedLossStats shifted_loss_stats(const ErrorDistribution& d, const LossParams& k, double c);
ShiftedLossStats shifted_loss_stats(const MomentTable& m, const LossParams& k, double c);

/// d/dc E[L(Z+c)] = (k1 - k2)/2 + sgn(c)(k1 + k2) ∫₀^{|c|} f.
double d_expected_loss(const ErrorDistribution& d, const LossParams& k, double c);
/// d²/dc² E[L(Z+c)] = (k1 + k2) f(c).
double d2_expected_loss(const ErrorDistribution& d, const LossParams& k, double c);

}  // namespace asymloss
