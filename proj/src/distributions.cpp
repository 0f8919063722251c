#include "asymloss/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "asymloss/specfun.hpp"

namespace asymloss {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be a positive finite number");
  }
}

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Gaussian and Laplace share the generalized Gaussian closed forms.
GeneralizedGaussian as_generalized(const Gaussian& g) {
  return {0.5, g.sigma * std::numbers::sqrt2};
}
GeneralizedGaussian as_generalized(const Laplace& l) { return {1.0, l.b}; }

struct ExtMoments {
  std::array<long double, 3> lower{};
  std::array<long double, 3> upper{};
  long double density = 0;
};

// Substituting u = (t/b)^{1/a} maps tᵏ f(t) dt onto
// bᵏ / (2 Γ(a)) · u^{(k+1)a - 1} e^{-u} du.
ExtMoments ggd_moments(const GeneralizedGaussian& g, double x) {
  const long double a = g.a;
  const long double b = g.b;
  const long double u = std::pow(static_cast<long double>(x) / b, 1.0L / a);
  const long double lg = std::lgamma(a);
  ExtMoments m;
  m.density = std::exp(-u - std::log(2.0L * a * b) - lg);
  long double bk = 0.5L;
  for (std::size_t k = 0; k < 3; ++k) {
    const long double shape = static_cast<long double>(k + 1) * a;
    const long double ratio = bk * std::exp(std::lgamma(shape) - lg);
    const auto pq = specfun::regularized_pair_ext(shape, u);
    m.lower[k] = ratio * pq.p;
    m.upper[k] = ratio * pq.q;
    bk *= b;
  }
  return m;
}

ExtMoments uniform_moments(const Uniform& un, double x) {
  const long double w = un.w;
  const long double c = std::min<long double>(x, w);
  ExtMoments m;
  long double cp = c;
  long double wp = w;
  for (std::size_t k = 0; k < 3; ++k) {
    const long double denom = 2.0L * w * static_cast<long double>(k + 1);
    m.lower[k] = cp / denom;
    m.upper[k] = (wp - cp) / denom;
    cp *= c;
    wp *= w;
  }
  m.density = x <= un.w ? 1.0L / (2.0L * w) : 0.0L;
  return m;
}

ExtMoments empirical_moments(const EmpiricalSymmetric& e, double x) {
  ExtMoments m;
  const std::size_t segments = e.heights.size();
  for (std::size_t j = 0; j < segments; ++j) {
    const long double lo = e.knots[j];
    const long double hi = e.knots[j + 1];
    const long double h = 0.5L * e.heights[j];
    const long double cut = std::clamp<long double>(x, lo, hi);
    long double lo_p = lo, hi_p = hi, cut_p = cut;
    for (std::size_t k = 0; k < 3; ++k) {
      const long double kk = static_cast<long double>(k + 1);
      m.lower[k] += h * (cut_p - lo_p) / kk;
      m.upper[k] += h * (hi_p - cut_p) / kk;
      lo_p *= lo;
      hi_p *= hi;
      cut_p *= cut;
    }
    if (x >= e.knots[j] && x < e.knots[j + 1]) m.density = h;
  }
  return m;
}

}  // namespace

ErrorDistribution::ErrorDistribution(Kind kind) : kind_(std::move(kind)) {
  if (const auto* e = std::get_if<EmpiricalSymmetric>(&kind_)) {
    cumulative_.resize(e->knots.size());
    long double acc = 0;
    cumulative_[0] = 0;
    for (std::size_t j = 0; j < e->heights.size(); ++j) {
      acc += static_cast<long double>(e->heights[j]) * (e->knots[j + 1] - e->knots[j]);
      cumulative_[j + 1] = acc;
    }
  }
}

ErrorDistribution ErrorDistribution::generalized_gaussian(double a, double b) {
  require_positive(a, "generalized Gaussian shape a");
  require_positive(b, "generalized Gaussian scale b");
  return ErrorDistribution(GeneralizedGaussian{a, b});
}

ErrorDistribution ErrorDistribution::gaussian(double sigma) {
  require_positive(sigma, "Gaussian sigma");
  return ErrorDistribution(Gaussian{sigma});
}

ErrorDistribution ErrorDistribution::laplace(double b) {
  require_positive(b, "Laplace scale b");
  return ErrorDistribution(Laplace{b});
}

ErrorDistribution ErrorDistribution::uniform(double w) {
  require_positive(w, "uniform half-width w");
  return ErrorDistribution(Uniform{w});
}

ErrorDistribution ErrorDistribution::empirical(std::vector<double> knots,
                                               std::vector<double> heights) {
  if (heights.empty() || knots.size() != heights.size() + 1) {
    throw std::invalid_argument("empirical density needs one more knot than heights");
  }
  if (knots.front() != 0.0) throw std::invalid_argument("empirical density must start at 0");
  long double mass = 0;
  for (std::size_t j = 0; j < heights.size(); ++j) {
    if (!(knots[j + 1] > knots[j]) || !std::isfinite(knots[j + 1])) {
      throw std::invalid_argument("empirical knots must be finite and strictly increasing");
    }
    if (!(heights[j] > 0.0) || !std::isfinite(heights[j])) {
      throw std::invalid_argument("empirical heights must be positive and finite");
    }
    if (j > 0 && heights[j] > heights[j - 1]) {
      throw std::invalid_argument("empirical density must be non-increasing on [0, inf)");
    }
    mass += static_cast<long double>(heights[j]) * (knots[j + 1] - knots[j]);
  }
  if (std::fabs(static_cast<double>(mass) - 1.0) > 1e-9) {
    throw std::invalid_argument("empirical density must integrate to one");
  }
  for (auto& h : heights) h = static_cast<double>(h / mass);
  return ErrorDistribution(EmpiricalSymmetric{std::move(knots), std::move(heights)});
}

double ErrorDistribution::pdf(double x) const {
  const double ax = std::fabs(x);
  return std::visit(
      Overloaded{
          [&](const GeneralizedGaussian& g) {
            const double u = std::pow(ax / g.b, 1.0 / g.a);
            return std::exp(-u - std::log(2.0 * g.a * g.b) - std::lgamma(g.a));
          },
          [&](const Gaussian& g) {
            const double s = ax / g.sigma;
            return std::exp(-0.5 * s * s) / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
          },
          [&](const Laplace& l) { return std::exp(-ax / l.b) / (2.0 * l.b); },
          [&](const Uniform& u) { return ax <= u.w ? 0.5 / u.w : 0.0; },
          [&](const EmpiricalSymmetric& e) {
            if (ax >= e.knots.back()) return 0.0;
            const auto it = std::upper_bound(e.knots.begin(), e.knots.end(), ax);
            return 0.5 * e.heights[static_cast<std::size_t>(it - e.knots.begin()) - 1];
          },
      },
      kind_);
}

double ErrorDistribution::cdf(double x) const {
  if (std::isnan(x)) return x;
  const double ax = std::fabs(x);
  // Mass of |Z| above |x|, halved: the tail on the side of x.
  const double tail = std::visit(
      Overloaded{
          [&](const GeneralizedGaussian& g) {
            return 0.5 * specfun::regularized_upper(g.a, std::pow(ax / g.b, 1.0 / g.a));
          },
          [&](const Gaussian& g) {
            return 0.5 * std::erfc(ax / (g.sigma * std::numbers::sqrt2));
          },
          [&](const Laplace& l) { return 0.5 * std::exp(-ax / l.b); },
          [&](const Uniform& u) { return ax >= u.w ? 0.0 : 0.5 * (u.w - ax) / u.w; },
          [&](const EmpiricalSymmetric& e) {
            if (ax >= e.knots.back()) return 0.0;
            const auto it = std::upper_bound(e.knots.begin(), e.knots.end(), ax);
            const auto j = static_cast<std::size_t>(it - e.knots.begin()) - 1;
            const long double g = cumulative_[j] + e.heights[j] * (ax - e.knots[j]);
            return static_cast<double>(0.5L * std::max<long double>(0, 1.0L - g));
          },
      },
      kind_);
  return x < 0 ? tail : 1.0 - tail;
}

double ErrorDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  // Upper-tail mass of |Z| at the requested point.
  const double q = p > 0.5 ? 2.0 * (1.0 - p) : 2.0 * p;
  const double magnitude = std::visit(
      Overloaded{
          [&](const GeneralizedGaussian& g) {
            return g.b * std::pow(specfun::inverse_regularized_upper(g.a, q), g.a);
          },
          [&](const Gaussian& g) {
            const auto gg = as_generalized(g);
            return gg.b * std::pow(specfun::inverse_regularized_upper(gg.a, q), gg.a);
          },
          [&](const Laplace& l) { return -l.b * std::log(q); },
          [&](const Uniform& u) { return u.w * (1.0 - q); },
          [&](const EmpiricalSymmetric&) { return empirical_inverse(1.0L - q); },
      },
      kind_);
  return p > 0.5 ? magnitude : -magnitude;
}

double ErrorDistribution::empirical_inverse(long double g) const {
  const auto& e = std::get<EmpiricalSymmetric>(kind_);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), g);
  auto j = static_cast<std::size_t>(it - cumulative_.begin());
  j = std::clamp<std::size_t>(j, 1, e.heights.size()) - 1;
  const long double t = e.knots[j] + (g - cumulative_[j]) / e.heights[j];
  return static_cast<double>(std::min<long double>(t, e.knots.back()));
}

TailTerms ErrorDistribution::tail_terms(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("tail_terms: x must be non-negative");
  const ExtMoments m = std::visit(
      Overloaded{
          [&](const GeneralizedGaussian& g) { return ggd_moments(g, x); },
          [&](const Gaussian& g) { return ggd_moments(as_generalized(g), x); },
          [&](const Laplace& l) { return ggd_moments(as_generalized(l), x); },
          [&](const Uniform& u) { return uniform_moments(u, x); },
          [&](const EmpiricalSymmetric& e) { return empirical_moments(e, x); },
      },
      kind_);
  TailTerms t;
  t.mass_below = m.lower[0];
  t.mass_above = m.upper[0];
  t.first_above = m.upper[1];
  t.second_below = m.lower[2];
  t.excess = std::max<long double>(0, m.upper[1] - static_cast<long double>(x) * m.upper[0]);
  t.density = m.density;
  return t;
}

MomentTable ErrorDistribution::partial_moments(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("partial_moments: x must be non-negative");
  const ExtMoments m = std::visit(
      Overloaded{
          [&](const GeneralizedGaussian& g) { return ggd_moments(g, x); },
          [&](const Gaussian& g) { return ggd_moments(as_generalized(g), x); },
          [&](const Laplace& l) { return ggd_moments(as_generalized(l), x); },
          [&](const Uniform& u) { return uniform_moments(u, x); },
          [&](const EmpiricalSymmetric& e) { return empirical_moments(e, x); },
      },
      kind_);
  MomentTable table;
  table.x = x;
  for (std::size_t k = 0; k < 3; ++k) {
    table.lower[k] = static_cast<double>(m.lower[k]);
    table.upper[k] = static_cast<double>(m.upper[k]);
  }
  return table;
}

double ErrorDistribution::draw(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&](const GeneralizedGaussian& g) {
            const double u = uniform_open(rng);
            const double mag = g.b * std::pow(specfun::inverse_regularized_upper(g.a, u), g.a);
            return random_sign_bit(rng) ? -mag : mag;
          },
          [&](const Gaussian& g) {
            // Marsaglia polar method; the second variate is discarded.
            for (;;) {
              const double v1 = 2.0 * uniform_open(rng) - 1.0;
              const double v2 = 2.0 * uniform_open(rng) - 1.0;
              const double s = v1 * v1 + v2 * v2;
              if (s > 0.0 && s < 1.0) return g.sigma * v1 * std::sqrt(-2.0 * std::log(s) / s);
            }
          },
          [&](const Laplace& l) {
            const double mag = -l.b * std::log(uniform_open(rng));
            return random_sign_bit(rng) ? -mag : mag;
          },
          [&](const Uniform& un) {
            const double mag = un.w * uniform_open(rng);
            return random_sign_bit(rng) ? -mag : mag;
          },
          [&](const EmpiricalSymmetric&) {
            const double mag = empirical_inverse(uniform_open(rng));
            return random_sign_bit(rng) ? -mag : mag;
          },
      },
      kind_);
}

std::vector<double> ErrorDistribution::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw std::invalid_argument("sample: n must be at least 1");
  std::vector<double> out;
  out.reserve(n);
  for (std::uint64_t chunk = 0; out.size() < n; ++chunk) {
    Rng rng(chunk_seed(seed, chunk));
    const std::size_t take = std::min<std::size_t>(kSampleChunk, n - out.size());
    for (std::size_t i = 0; i < take; ++i) out.push_back(draw(rng));
  }
  return out;
}

double ErrorDistribution::scale() const {
  return std::visit(Overloaded{
                        [](const GeneralizedGaussian& g) { return g.b; },
                        [](const Gaussian& g) { return g.sigma; },
                        [](const Laplace& l) { return l.b; },
                        [](const Uniform& u) { return u.w; },
                        [this](const EmpiricalSymmetric& e) {
                          return std::sqrt(2.0 * partial_moments(e.knots.back()).lower[2]);
                        },
                    },
                    kind_);
}

ErrorDistribution ErrorDistribution::scaled(double lambda) const {
  require_positive(lambda, "scale factor");
  return std::visit(Overloaded{
                        [&](const GeneralizedGaussian& g) {
                          return generalized_gaussian(g.a, g.b * lambda);
                        },
                        [&](const Gaussian& g) { return gaussian(g.sigma * lambda); },
                        [&](const Laplace& l) { return laplace(l.b * lambda); },
                        [&](const Uniform& u) { return uniform(u.w * lambda); },
                        [&](const EmpiricalSymmetric& e) {
                          auto knots = e.knots;
                          auto heights = e.heights;
                          for (auto& k : knots) k *= lambda;
                          for (auto& h : heights) h /= lambda;
                          return empirical(std::move(knots), std::move(heights));
                        },
                    },
                    kind_);
}

double ErrorDistribution::support_end() const {
  if (const auto* u = std::get_if<Uniform>(&kind_)) return u->w;
  if (const auto* e = std::get_if<EmpiricalSymmetric>(&kind_)) return e->knots.back();
  return std::numeric_limits<double>::infinity();
}

bool ErrorDistribution::strictly_decreasing() const {
  return std::holds_alternative<GeneralizedGaussian>(kind_) ||
         std::holds_alternative<Gaussian>(kind_) || std::holds_alternative<Laplace>(kind_);
}

std::vector<double> ErrorDistribution::breakpoints() const {
  if (const auto* u = std::get_if<Uniform>(&kind_)) return {0.0, u->w};
  if (const auto* e = std::get_if<EmpiricalSymmetric>(&kind_)) return e->knots;
  return {0.0};
}

std::string ErrorDistribution::family() const {
  return std::visit(Overloaded{
                        [](const GeneralizedGaussian&) { return std::string("gg"); },
                        [](const Gaussian&) { return std::string("gauss"); },
                        [](const Laplace&) { return std::string("laplace"); },
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const EmpiricalSymmetric&) { return std::string("empirical"); },
                    },
                    kind_);
}

std::string ErrorDistribution::describe() const {
  return std::visit(
      Overloaded{
          [](const GeneralizedGaussian& g) {
            return "gg:a=" + number(g.a) + ",b=" + number(g.b);
          },
          [](const Gaussian& g) { return "gauss:sigma=" + number(g.sigma); },
          [](const Laplace& l) { return "laplace:b=" + number(l.b); },
          [](const Uniform& u) { return "uniform:w=" + number(u.w); },
          [](const EmpiricalSymmetric& e) {
            return "empirical:knots=" + std::to_string(e.knots.size());
          },
      },
      kind_);
}

MomentTable partial_moments_by_quadrature(const ErrorDistribution& d, double x,
                                          const quad::Tolerance& tol) {
  if (!(x >= 0.0)) throw std::domain_error("partial_moments_by_quadrature: x must be >= 0");
  const double end = d.support_end();
  std::vector<double> cuts = d.breakpoints();
  cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  MomentTable table;
  table.x = x;
  for (std::size_t k = 0; k < 3; ++k) {
    auto integrand = [&d, k](double t) {
      double tk = 1.0;
      for (std::size_t i = 0; i < k; ++i) tk *= t;
      return tk * d.pdf(t);
    };
    double lower = 0.0;
    double upper = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i];
      const double hi = std::min(cuts[i + 1], end);
      if (!(hi > lo)) continue;
      const double v = quad::integrate(integrand, lo, hi, tol).value;
      (hi <= x ? lower : upper) += v;
    }
    const double last = cuts.back();
    if (std::isinf(end)) upper += quad::integrate_upper_tail(integrand, last, tol).value;
    table.lower[k] = lower;
    table.upper[k] = upper;
  }
  return table;
}

}  // namespace asymloss
