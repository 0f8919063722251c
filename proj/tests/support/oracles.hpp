#pragma once

// Reference computations for the test suites. Everything here is built from
// textbook definitions and double-exponential quadrature, sharing no code
// with the library under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

/// ∫_a^b f by tanh-sinh quadrature with step halving. Tolerates integrable
/// endpoint singularities.
inline double tanh_sinh(const Fn& f, double a, double b, double rel = 1e-14,
                        double abs = 1e-300) {
  if (!(b > a)) return 0.0;
  const double hw = 0.5 * (b - a);
  const double half_pi = 0.5 * std::numbers::pi;
  auto contribution = [&](double t) {
    const double u = half_pi * std::sinh(t);
    const double e = std::exp(-2.0 * u);
    const double delta = hw * 2.0 * e / (1.0 + e);
    const double w = hw * half_pi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    if (w == 0.0) return 0.0;
    double s = 0.0;
    const double xl = a + delta;
    const double xr = b - delta;
    if (xl > a && xl < b) s += w * f(xl);
    if (t != 0.0 && xr > a && xr < b) s += w * f(xr);
    return s;
  };
  constexpr double tmax = 6.5;
  double h = 1.0;
  double sum = 0.0;
  for (double t = 0.0; t <= tmax; t += h) sum += contribution(t);
  double estimate = sum * h;
  for (int level = 1; level <= 10; ++level) {
    h *= 0.5;
    for (double t = h; t <= tmax; t += 2.0 * h) sum += contribution(t);
    const double next = sum * h;
    if (level >= 3 && std::fabs(next - estimate) <= rel * std::fabs(next) + abs) return next;
    estimate = next;
  }
  return estimate;
}

/// ∫_a^∞ f by exp-sinh quadrature; the integrand must be negligible past 1e150.
inline double exp_sinh(const Fn& f, double a, double rel = 1e-14, double abs = 1e-300) {
  const double half_pi = 0.5 * std::numbers::pi;
  auto contribution = [&](double t) {
    const double u = half_pi * std::sinh(t);
    const double e = std::exp(u);
    const double x = a + e;
    if (!(x > a) || x > 1e150) return 0.0;
    const double w = half_pi * std::cosh(t) * e;
    const double v = f(x);
    return v == 0.0 ? 0.0 : w * v;
  };
  constexpr double tmax = 6.0;
  double h = 1.0;
  double sum = contribution(0.0);
  for (double t = h; t <= tmax; t += h) sum += contribution(t) + contribution(-t);
  double estimate = sum * h;
  for (int level = 1; level <= 10; ++level) {
    h *= 0.5;
    for (double t = h; t <= tmax; t += 2.0 * h) sum += contribution(t) + contribution(-t);
    const double next = sum * h;
    if (level >= 3 && std::fabs(next - estimate) <= rel * std::fabs(next) + abs) return next;
    estimate = next;
  }
  return estimate;
}

/// A symmetric density given by its formula.
struct Density {
  Fn pdf;
  double support_end = std::numeric_limits<double>::infinity();
  std::vector<double> kinks;  // interior points on (0, support_end) where pdf is not smooth
};

inline Density gg(double a, double b) {
  const double norm = 1.0 / (2.0 * a * b * std::tgamma(a));
  return {[=](double z) { return norm * std::exp(-std::pow(std::fabs(z) / b, 1.0 / a)); }};
}

inline Density gaussian(double sigma) {
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return {[=](double z) { return norm * std::exp(-0.5 * (z / sigma) * (z / sigma)); }};
}

inline Density laplace(double b) {
  return {[=](double z) { return std::exp(-std::fabs(z) / b) / (2.0 * b); }};
}

inline Density uniform(double w) {
  return {[=](double z) { return std::fabs(z) <= w ? 0.5 / w : 0.0; }, w};
}

/// ∫_lo^hi g(t) f(t) dt for 0 <= lo <= hi <= inf, split at the kinks.
inline double integrate_half(const Density& d, const Fn& g, double lo, double hi) {
  hi = std::min(hi, d.support_end);
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo};
  for (double k : d.kinks) {
    if (k > lo && k < hi) cuts.push_back(k);
  }
  double total = 0.0;
  auto gf = [&](double t) { return g(t) * d.pdf(t); };
  if (std::isinf(hi)) {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += tanh_sinh(gf, cuts[i], cuts[i + 1]);
    total += exp_sinh(gf, cuts.back());
  } else {
    cuts.push_back(hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += tanh_sinh(gf, cuts[i], cuts[i + 1]);
  }
  return total;
}

/// ∫_ℝ g(z) f(z) dz, split at 0 and at the given points.
inline double integrate_line(const Density& d, const Fn& g, std::vector<double> cuts) {
  cuts.push_back(0.0);
  std::vector<double> pos, neg;
  for (double c : cuts) {
    if (c >= 0.0) pos.push_back(c);
    if (c <= 0.0) neg.push_back(-c);
  }
  auto piecewise = [&](const Fn& h, std::vector<double> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += integrate_half(d, h, pts[i], pts[i + 1]);
    s += integrate_half(d, h, pts.back(), std::numeric_limits<double>::infinity());
    return s;
  };
  const double right = piecewise(g, pos);
  const double left = piecewise([&](double t) { return g(-t); }, neg);
  return right + left;
}

inline double partial_lower(const Density& d, int k, double x) {
  return integrate_half(d, [k](double t) { return std::pow(t, k); }, 0.0, x);
}

inline double partial_upper(const Density& d, int k, double x) {
  return integrate_half(d, [k](double t) { return std::pow(t, k); }, x,
                        std::numeric_limits<double>::infinity());
}

inline double cdf(const Density& d, double x) {
  const double m = partial_lower(d, 0, std::fabs(x));
  return x >= 0.0 ? 0.5 + m : 0.5 - m;
}

inline double loss(double z, double k1, double k2) { return z >= 0.0 ? k1 * z : -k2 * z; }

inline double expected_loss(const Density& d, double k1, double k2, double c) {
  return integrate_line(d, [=](double z) { return loss(z + c, k1, k2); }, {-c});
}

inline double variance_of_loss(const Density& d, double k1, double k2, double c) {
  const double m1 = expected_loss(d, k1, k2, c);
  const double m2 = integrate_line(
      d, [=](double z) { double l = loss(z + c, k1, k2); return l * l; }, {-c});
  return m2 - m1 * m1;
}

/// Root of a monotone function on [lo, hi] by plain bisection.
inline double bisect(const Fn& g, double lo, double hi, int iterations = 200) {
  double glo = g(lo);
  if (glo == 0.0) return lo;
  if ((glo > 0.0) == (g(hi) > 0.0)) throw std::invalid_argument("bisect: no sign change");
  for (int i = 0; i < iterations && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Minimizer of E[L(Z + c)] as the k2/(k1+k2) quantile, by bisection on the
/// integrated cdf.
inline double optimal_offset(const Density& d, double k1, double k2) {
  const double target = k2 / (k1 + k2);
  double hi = 1.0;
  while (cdf(d, hi) < std::max(target, 1.0 - target) && hi < 1e6) hi *= 2.0;
  return bisect([&](double c) { return cdf(d, c) - target; }, -hi, hi);
}

/// α(x) straight from its definition on the half-density.
inline double alpha(const Density& d, double x) {
  const double l0 = partial_lower(d, 0, x);
  const double u1 = partial_upper(d, 1, x);
  return 4.0 * l0 * u1 - 0.5 * x + 2.0 * x * l0 * l0;
}

/// β(x) straight from its definition on the half-density.
inline double beta(const Density& d, double x) {
  const double l0 = partial_lower(d, 0, x);
  const double l2 = partial_lower(d, 2, x);
  const double u1 = partial_upper(d, 1, x);
  const double m1 = u1 + partial_lower(d, 1, x);
  return -m1 * m1 + 2.0 * l0 * l2 + 4.0 * x * l0 * u1 - 0.25 * x * x + u1 * u1 +
         x * x * l0 * l0;
}

/// x^a γ(a,x)² − x^a Γ(a)² + 2 γ(a,x) Γ(2a,x) from integral definitions.
inline double ggd_lhs(double a, double x) {
  const double lower = tanh_sinh([a](double t) { return std::exp((a - 1.0) * std::log(t) - t); },
                                 0.0, x);
  const double upper2 =
      exp_sinh([a](double t) { return std::exp((2.0 * a - 1.0) * std::log(t) - t); }, x);
  const double g = std::tgamma(a);
  const double xa = std::pow(x, a);
  return xa * lower * lower - xa * g * g + 2.0 * lower * upper2;
}

inline bool close(double value, double reference, double rel, double abs = 0.0) {
  return std::fabs(value - reference) <= rel * std::fabs(reference) + abs;
}

}  // namespace oracle
