#include "asymloss/offset_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "asymloss/errors.hpp"
#include "asymloss/inequality_lab.hpp"

namespace asymloss {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kBracketTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-10;
constexpr double kVarianceAgreement = 1e-8;

struct Root {
  double magnitude;
  int iterations;
};

// Smallest m >= 0 with ∫₀^m f >= target, for target in (0, 1/2).
Root solve_half_mass(const ErrorDistribution& d, double target) {
  const auto mass = [&d](double m) { return d.partial_moments(m).lower[0]; };

  double lo = 0.0;
  double hi = std::min(d.scale(), d.support_end());
  int iterations = 0;
  while (mass(hi) < target) {
    lo = hi;
    hi = std::min(2.0 * hi, d.support_end());
    if (++iterations > 2000 || !std::isfinite(hi)) {
      throw NumericError("offset solver could not bracket the zero point", hi);
    }
  }

  double m = 0.5 * (lo + hi);
  double best = hi;
  double best_err = std::fabs(mass(hi) - target);
  for (; iterations < kMaxIterations; ++iterations) {
    const double g = mass(m) - target;
    const double f = d.pdf(m);
    if (std::fabs(g) < best_err) {
      best = m;
      best_err = std::fabs(g);
    }
    if (g == 0.0 && f > 0.0) break;
    if (g >= 0.0) hi = m; else lo = m;
    if (hi - lo <= kBracketTolerance * std::max(1.0, hi)) break;
    double next = f > 0.0 ? m - g / f : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    m = next;
  }
  // On a flat stretch every point is a root; bisection has driven hi to its
  // left end.
  m = d.pdf(best) > 0.0 ? best : hi;
  return {m, iterations};
}

}  // namespace

double zero_point_residual(const ErrorDistribution& d, const LossParams& k, double c) {
  return d_expected_loss(d, k, c);
}

OffsetSolution solve_offset(const ErrorDistribution& d, const LossParams& k) {
  OffsetSolution s;
  s.critical_fractile = k.critical_fractile();
  const double sum = k.sum();

  if (k.k1() != k.k2()) {
    const double sign = k.k2() > k.k1() ? 1.0 : -1.0;
    const double target = std::fabs(k.k1() - k.k2()) / (2.0 * sum);
    const Root root = solve_half_mass(d, target);
    s.C = sign * root.magnitude;
    s.iterations = root.iterations;
    // A flat cdf at the target level leaves an interval of minimizers.
    const double probe = root.magnitude * (1.0 + 1e-9) + 1e-12 * d.scale();
    s.multiple_minimizers = d.pdf(s.C) == 0.0 &&
                            std::fabs(d.partial_moments(probe).lower[0] - target) < 1e-15;
  }

  const double ac = std::fabs(s.C);
  const MomentTable at_c = d.partial_moments(ac);
  const MomentTable at_0 = d.partial_moments(0.0);

  s.residual = 0.5 * (k.k1() - k.k2()) + sign_nonneg(s.C) * sum * at_c.lower[0];
  s.cdf_at_C = d.cdf(s.C);
  if (std::fabs(s.residual) > kResidualTolerance) {
    throw NumericError("zero-point residual above tolerance", std::fabs(s.residual));
  }
  const double quantile_form = sum * (s.cdf_at_C - s.critical_fractile);
  if (std::fabs(quantile_form - s.residual) > 1e-12 * sum + 1e-12) {
    throw NumericError("zero-point and critical-fractile forms disagree",
                       std::fabs(quantile_form - s.residual));
  }

  const ShiftedLossStats base = shifted_loss_stats(at_0, k, 0.0);
  const ShiftedLossStats shifted = shifted_loss_stats(at_c, k, s.C);
  s.expected_at_0 = base.expected;
  s.variance_at_0 = base.variance;
  s.expected_at_C = sum * at_c.upper[1];
  s.variance_at_C_direct = shifted.variance;

  const double k2sum = sum * sum;
  const double g = at_c.lower[0];
  const double u1 = at_c.upper[1];
  s.variance_at_C = (k.k1() * k.k1() + k.k2() * k.k2()) * at_c.total(2) -
                    2.0 * k2sum * g * at_c.lower[2] - 4.0 * ac * k2sum * g * u1 +
                    0.25 * s.C * s.C * k2sum - k2sum * u1 * u1 - s.C * s.C * k2sum * g * g;
  const double scale = std::max({std::fabs(s.variance_at_C), std::fabs(s.variance_at_C_direct),
                                 1e-300});
  if (std::fabs(s.variance_at_C - s.variance_at_C_direct) > kVarianceAgreement * scale +
                                                                1e-14 * k2sum * at_c.total(2)) {
    throw NumericError("variance at C: closed form and direct evaluation disagree",
                       std::fabs(s.variance_at_C - s.variance_at_C_direct) / scale);
  }

  s.beta_at_C = lab::beta(d, ac);
  return s;
}

SavingsReport savings_report(const ErrorDistribution& d, const LossParams& k) {
  SavingsReport r;
  r.solution = solve_offset(d, k);
  r.delta_expected = r.solution.expected_at_0 - r.solution.expected_at_C;
  r.delta_variance = r.solution.variance_at_0 - r.solution.variance_at_C;
  const auto pct = [](double delta, double base) { return base > 0.0 ? 100.0 * delta / base : 0.0; };
  r.delta_expected_pct = pct(r.delta_expected, r.solution.expected_at_0);
  r.delta_variance_pct = pct(r.delta_variance, r.solution.variance_at_0);
  return r;
}

}  // namespace asymloss
