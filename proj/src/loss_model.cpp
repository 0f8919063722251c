#include "asymloss/loss_model.hpp"

#include <cmath>
#include <stdexcept>

namespace asymloss {

LossParams::LossParams(double k1, double k2) : k1_(k1), k2_(k2) {
  if (!(k1 > 0.0) || !std::isfinite(k1) || !(k2 > 0.0) || !std::isfinite(k2)) {
    throw std::invalid_argument("loss slopes k1 and k2 must be positive and finite");
  }
}

double loss(double z, const LossParams& k) { return z >= 0.0 ? k.k1() * z : -k.k2() * z; }

ShiftedLossStats shifted_loss_stats(const MomentTable& m, const LossParams& k, double c) {
  const double k1 = k.k1();
  const double k2 = k.k2();
  const double ac = std::fabs(c);
  const double sum = k1 + k2;
  const double sum_sq = k1 * k1 + k2 * k2;
  const double diff_sq = k1 * k1 - k2 * k2;
  const double mass = m.lower[0];       // ∫₀^{|c|} f
  const double first_up = m.upper[1];   // ∫_{|c|}^∞ z f
  const double second_lo = m.lower[2];  // ∫₀^{|c|} z² f
  const double second = m.total(2);     // ∫₀^∞ z² f

  ShiftedLossStats s;
  s.c = c;
  s.expected = sum * first_up + 0.5 * c * (k1 - k2) + ac * sum * mass;
  s.expected_sq = sum_sq * second + sign_nonneg(c) * diff_sq * second_lo +
                  2.0 * c * diff_sq * first_up + 0.5 * c * c * sum_sq +
                  c * ac * diff_sq * mass;
  s.variance = s.expected_sq - s.expected * s.expected;
  return s;
}

ShiftedLossStats shifted_loss_stats(const ErrorDistribution& d, const LossParams& k, double c) {
  if (!std::isfinite(c)) throw std::domain_error("shift c must be finite");
  return shifted_loss_stats(d.partial_moments(std::fabs(c)), k, c);
}

double expected_loss(const ErrorDistribution& d, const LossParams& k, double c) {
  return shifted_loss_stats(d, k, c).expected;
}

double expected_loss_sq(const ErrorDistribution& d, const LossParams& k, double c) {
  if (!d.has_finite_second_moment()) {
    throw std::domain_error("E[L(Z+c)^2] requires a finite second moment");
  }
  return shifted_loss_stats(d, k, c).expected_sq;
}

double variance_of_loss(const ErrorDistribution& d, const LossParams& k, double c) {
  if (!d.has_finite_second_moment()) {
    throw std::domain_error("Var[L(Z+c)] requires a finite second moment");
  }
  return shifted_loss_stats(d, k, c).variance;
}

double d_expected_loss(const ErrorDistribution& d, const LossParams& k, double c) {
  if (!std::isfinite(c)) throw std::domain_error("shift c must be finite");
  const double mass = d.partial_moments(std::fabs(c)).lower[0];
  return 0.5 * (k.k1() - k.k2()) + sign_nonneg(c) * k.sum() * mass;
}

double d2_expected_loss(const ErrorDistribution& d, const LossParams& k, double c) {
  return k.sum() * d.pdf(c);
}

}  // namespace asymloss
