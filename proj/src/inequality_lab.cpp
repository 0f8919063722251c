#include "asymloss/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "asymloss/detail/parallel.hpp"
#include "asymloss/specfun.hpp"

namespace asymloss::lab {

namespace {

void require_nonnegative(double x, const char* where) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(where) + ": x must be finite and non-negative");
  }
}

}  // namespace

long double alpha(const ErrorDistribution& d, double x) {
  require_nonnegative(x, "alpha");
  const TailTerms t = d.tail_terms(x);
  return 4.0L * t.mass_below * t.excess -
         2.0L * static_cast<long double>(x) * t.mass_above * t.mass_above;
}

double alpha_direct(const ErrorDistribution& d, double x) {
  require_nonnegative(x, "alpha_direct");
  const MomentTable m = d.partial_moments(x);
  const double g = m.lower[0];
  return 4.0 * g * m.upper[1] - 0.5 * x + 2.0 * x * g * g;
}

double beta(const ErrorDistribution& d, double x) {
  require_nonnegative(x, "beta");
  if (!d.has_finite_second_moment()) throw std::domain_error("beta: infinite second moment");
  const MomentTable m = d.partial_moments(x);
  const double g = m.lower[0];
  const double tail = m.upper[0];
  // −M1² + U1² = −L1 (M1 + U1) and x²g² − x²/4 = −x² T (1/2 + g).
  return 2.0 * g * m.lower[2] + 4.0 * x * g * m.upper[1] -
         m.lower[1] * (m.total(1) + m.upper[1]) - x * x * tail * (0.5 + g);
}

DBetaParts d_beta(const ErrorDistribution& d, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("d_beta: x must be positive");
  const MomentTable m = d.partial_moments(x);
  const double f = d.pdf(x);
  const double g = m.lower[0];
  DBetaParts parts;
  parts.alpha = static_cast<double>(alpha(d, x));
  parts.second_moment_term = 2.0 * f * m.lower[2];
  parts.first_moment_term = 2.0 * x * f * m.upper[1];
  parts.total = 4.0 * g * m.upper[1] - 0.5 * x + 2.0 * x * g * g + parts.second_moment_term +
                parts.first_moment_term;
  return parts;
}

ExtremalBound extremal_bound(const ErrorDistribution& d, double x) {
  require_nonnegative(x, "extremal_bound");
  const TailTerms t = d.tail_terms(x);
  ExtremalBound b;
  b.gamma = t.mass_below;
  b.x_times_density = static_cast<long double>(x) * t.density;
  b.s_of_f = t.first_above;
  if (t.density <= 0) {
    b.degenerate = true;
    b.s_of_u = b.s_of_f;
    return b;
  }
  // γ² − γ + 1/4 = (1/2 − γ)², the squared tail mass.
  b.s_of_u = static_cast<long double>(x) * t.mass_above +
             t.mass_above * t.mass_above / (2.0L * t.density);
  return b;
}

double ggd_inequality_lhs(double a, double x) {
  if (!(a > 0.0) || !(x > 0.0)) throw std::domain_error("ggd_inequality_lhs: need a > 0, x > 0");
  const double g = specfun::gamma(a);
  const double g2 = specfun::gamma(2.0 * a);
  const double p = specfun::regularized_lower(a, x);
  const double q = specfun::regularized_upper(a, x);
  const double q2 = specfun::regularized_upper(2.0 * a, x);
  const double xa = std::pow(x, a);
  return g * (2.0 * p * g2 * q2 - xa * g * q * (1.0 + p));
}

long double ggd_inequality_lhs_ext(long double a, long double x) {
  if (!(a > 0) || !(x > 0)) throw std::domain_error("ggd_inequality_lhs_ext: need a > 0, x > 0");
  const long double g = std::tgamma(a);
  const long double g2 = std::tgamma(2.0L * a);
  const auto pq = specfun::regularized_pair_ext(a, x);
  const auto pq2 = specfun::regularized_pair_ext(2.0L * a, x);
  const long double xa = std::pow(x, a);
  return g * (2.0L * pq.p * g2 * pq2.q - xa * g * pq.q * (1.0L + pq.p));
}

InequalityReport evaluate(const ErrorDistribution& d, double x) {
  InequalityReport r;
  r.distribution = d.describe();
  r.x = x;
  r.alpha = alpha(d, x);
  r.beta = beta(d, x);
  const ExtremalBound b = extremal_bound(d, x);
  r.s_of_u = b.s_of_u;
  r.s_of_f = b.s_of_f;
  r.gamma = b.gamma;
  r.x_times_density = b.x_times_density;
  r.degenerate = b.degenerate;

  long double margin = std::min<long double>(r.alpha, r.beta);
  margin = std::min(margin, r.gamma - r.x_times_density);
  if (!r.degenerate) margin = std::min(margin, r.s_of_f - r.s_of_u);
  if (const auto* g = std::get_if<GeneralizedGaussian>(&d.kind()); g && x > 0.0) {
    const long double u = std::pow(static_cast<long double>(x) / g->b, 1.0L / g->a);
    r.ggd_lhs = ggd_inequality_lhs_ext(g->a, u);
    margin = std::min(margin, *r.ggd_lhs);
  }
  r.margin = margin;
  r.pass = margin >= -kInequalitySlack;
  return r;
}

std::vector<double> grid_points(const ErrorDistribution& d, const SweepGrid& grid) {
  if (grid.points == 0) throw std::invalid_argument("sweep grid needs at least one point");
  if (!(grid.span_in_scales > 0.0)) throw std::invalid_argument("sweep span must be positive");
  const double span = grid.span_in_scales * d.scale();
  std::vector<double> xs(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) {
    if (grid.include_zero) {
      xs[i] = grid.points == 1 ? 0.0
                               : span * static_cast<double>(i) /
                                     static_cast<double>(grid.points - 1);
    } else {
      xs[i] = span * static_cast<double>(i + 1) / static_cast<double>(grid.points);
    }
  }
  return xs;
}

SweepSummary sweep(std::span<const ErrorDistribution> family, const SweepGrid& grid,
                   unsigned workers) {
  if (family.empty()) throw std::invalid_argument("sweep: empty distribution family");
  std::vector<std::vector<double>> xs;
  xs.reserve(family.size());
  for (const auto& d : family) xs.push_back(grid_points(d, grid));

  const std::size_t total = family.size() * grid.points;
  SweepSummary summary;
  summary.reports.resize(total);
  detail::parallel_for(total, workers, [&](std::size_t i) {
    const std::size_t di = i / grid.points;
    summary.reports[i] = evaluate(family[di], xs[di][i % grid.points]);
  });

  summary.min_margin = std::numeric_limits<long double>::infinity();
  for (const auto& r : summary.reports) {
    summary.min_margin = std::min(summary.min_margin, r.margin);
    if (!r.pass) ++summary.failures;
  }
  summary.pass = summary.failures == 0;
  return summary;
}

GgdSummary sweep_ggd(std::span<const double> shapes, std::span<const double> xs,
                     unsigned workers) {
  if (shapes.empty() || xs.empty()) throw std::invalid_argument("sweep_ggd: empty grid");
  GgdSummary summary;
  summary.reports.resize(shapes.size() * xs.size());
  detail::parallel_for(summary.reports.size(), workers, [&](std::size_t i) {
    GgdReport r;
    r.a = shapes[i / xs.size()];
    r.x = xs[i % xs.size()];
    r.lhs = ggd_inequality_lhs(r.a, r.x);
    const auto d = ErrorDistribution::generalized_gaussian(r.a, 1.0);
    r.alpha_matched = alpha(d, std::pow(r.x, r.a));
    const auto sgn = [](long double v) { return (v > 0) - (v < 0); };
    r.sign_agrees = sgn(r.lhs) == sgn(r.alpha_matched);
    summary.reports[i] = r;
  });
  summary.min_lhs = std::numeric_limits<double>::infinity();
  summary.signs_agree = true;
  for (const auto& r : summary.reports) {
    summary.min_lhs = std::min(summary.min_lhs, r.lhs);
    summary.signs_agree = summary.signs_agree && r.sign_agrees;
  }
  summary.all_positive = summary.min_lhs > 0.0;
  return summary;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw std::invalid_argument("log_space: bad range");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = hi;
    return out;
  }
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(llo + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace asymloss::lab
