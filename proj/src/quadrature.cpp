#include "asymloss/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "asymloss/errors.hpp"

namespace asymloss::quad {

namespace {

// 15-point Kronrod abscissae; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  double err = std::fabs(kronrod - gauss);
  // Floor at rounding level so that smooth integrands terminate.
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::fabs(kronrod));
  return {lo, hi, kronrod, err};
}

}  // namespace

Result integrate(const Integrand& f, double lo, double hi, const Tolerance& tol) {
  Result result;
  if (lo == hi) return result;
  if (!(std::isfinite(lo) && std::isfinite(hi))) {
    throw std::invalid_argument("integrate: bounds must be finite");
  }
  const double sign = hi > lo ? 1.0 : -1.0;
  if (sign < 0) std::swap(lo, hi);

  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, lo, hi);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  result.evaluations = 15;

  while (total_error > std::max(tol.absolute, tol.relative * std::fabs(total))) {
    if (heap.size() >= tol.max_intervals) {
      throw NumericError("adaptive quadrature exceeded its interval budget", total_error);
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw NumericError("adaptive quadrature hit the resolution limit", total_error);
    }
    heap.pop();
    const Segment left = kronrod15(f, worst.lo, mid);
    const Segment right = kronrod15(f, mid, worst.hi);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the segments to shed accumulated update rounding.
  double value = 0.0;
  double error = 0.0;
  result.intervals = heap.size();
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = sign * value;
  result.error = error;
  return result;
}

Result integrate_upper_tail(const Integrand& f, double lo, const Tolerance& tol) {
  if (!std::isfinite(lo)) throw std::invalid_argument("integrate_upper_tail: lo must be finite");
  auto mapped = [&f, lo](double s) {
    const double gap = 1.0 - s;
    const double t = lo + s / gap;
    if (!std::isfinite(t)) return 0.0;
    const double v = f(t);
    if (v == 0.0) return 0.0;
    return v / (gap * gap);
  };
  return integrate(mapped, 0.0, 1.0, tol);
}

}  // namespace asymloss::quad
