#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "asymloss/distributions.hpp"
#include "asymloss/errors.hpp"

namespace asymloss {

namespace {

constexpr std::size_t kMinObservations = 30;

struct Point {
  double x;
  double y;
};

// > 0 when b lies to the left of the ray o -> a.
double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

double sign_test_p_value(std::size_t positives, std::size_t trials) {
  if (positives > trials) throw std::invalid_argument("sign test: positives exceed trials");
  if (trials == 0) return 1.0;
  const std::size_t k = std::min(positives, trials - positives);
  const double n = static_cast<double>(trials);
  const double log_norm = std::lgamma(n + 1.0) - n * std::numbers::ln2;
  // log-sum-exp of the binomial lower tail up to k.
  std::vector<double> logs;
  logs.reserve(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    const double di = static_cast<double>(i);
    logs.push_back(log_norm - std::lgamma(di + 1.0) - std::lgamma(n - di + 1.0));
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - peak);
  return std::min(1.0, 2.0 * std::exp(peak) * sum);
}

EmpiricalFit fit_empirical(std::span<const double> errors) {
  if (errors.size() < kMinObservations) {
    throw InsufficientDataError("fit_empirical: need at least 30 observations, got " +
                                std::to_string(errors.size()));
  }
  AssumptionDiagnostics diag;
  diag.n = errors.size();
  std::vector<double> magnitudes;
  magnitudes.reserve(errors.size());
  double sum = 0.0;
  for (double z : errors) {
    if (!std::isfinite(z)) throw std::invalid_argument("fit_empirical: non-finite error value");
    if (z > 0) ++diag.positives;
    else if (z < 0) ++diag.negatives;
    else ++diag.zeros;
    sum += z;
    magnitudes.push_back(std::fabs(z));
  }
  diag.mean_error = sum / static_cast<double>(errors.size());
  if (diag.zeros == errors.size()) {
    throw ZeroSpreadError("fit_empirical: all errors are zero; no density exists");
  }

  const std::size_t nonzero = diag.positives + diag.negatives;
  diag.sign_test_statistic =
      (static_cast<double>(diag.positives) - static_cast<double>(diag.negatives)) /
      std::sqrt(static_cast<double>(nonzero));
  diag.sign_test_p_value = sign_test_p_value(diag.positives, nonzero);

  {
    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());
    bool mirror = true;
    for (std::size_t i = 0, j = sorted.size() - 1; i < sorted.size(); ++i, --j) {
      if (sorted[i] != -sorted[j]) {
        mirror = false;
        break;
      }
    }
    diag.symmetric_by_construction = mirror;
  }

  // ECDF of |Z| at its distinct positive values. A zero atom is folded into
  // the first segment by anchoring the majorant at the origin.
  std::sort(magnitudes.begin(), magnitudes.end());
  const double n = static_cast<double>(magnitudes.size());
  std::vector<Point> points{{0.0, 0.0}};
  for (std::size_t i = 0; i < magnitudes.size();) {
    std::size_t j = i;
    while (j < magnitudes.size() && magnitudes[j] == magnitudes[i]) ++j;
    if (magnitudes[i] > 0) points.push_back({magnitudes[i], static_cast<double>(j) / n});
    i = j;
  }
  points.back().y = 1.0;

  // Least concave majorant = upper hull of the ECDF points.
  std::vector<Point> hull;
  for (const auto& p : points) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }

  std::vector<double> knots;
  std::vector<double> heights;
  knots.reserve(hull.size());
  for (std::size_t i = 0; i < hull.size(); ++i) {
    knots.push_back(hull[i].x);
    if (i > 0) heights.push_back((hull[i].y - hull[i - 1].y) / (hull[i].x - hull[i - 1].x));
  }
  // Slopes of a concave hull are non-increasing up to rounding.
  for (std::size_t i = 1; i < heights.size(); ++i) heights[i] = std::min(heights[i], heights[i - 1]);
  diag.knots = knots.size();

  double violation = 0.0;
  std::size_t seg = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double width = points[i].x - points[i - 1].x;
    const double naive = (points[i].y - points[i - 1].y) / width;
    while (seg + 1 < heights.size() && points[i].x > knots[seg + 1]) ++seg;
    violation += width * std::fabs(naive - heights[seg]);
  }
  diag.monotonicity_violation_mass = 0.5 * violation;

  // Renormalize away rounding in the slope products.
  long double mass = 0;
  for (std::size_t j = 0; j < heights.size(); ++j) {
    mass += static_cast<long double>(heights[j]) * (knots[j + 1] - knots[j]);
  }
  for (auto& h : heights) h = static_cast<double>(h / mass);

  return {ErrorDistribution::empirical(std::move(knots), std::move(heights)), diag};
}

}  // namespace asymloss
