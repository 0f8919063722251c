#include "asymloss/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "asymloss/detail/parallel.hpp"

namespace asymloss::mc {

namespace {

// Central moment accumulator with the one-pass update and pairwise merge of
// Pébay (2008).
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  void push(double x) {
    const double n1 = n;
    n += 1.0;
    const double delta = x - mean;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean += delta_n;
    m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
    m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
    m2 += term1;
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0.0) return b;
    if (b.n == 0.0) return a;
    Moments r;
    r.n = a.n + b.n;
    const double delta = b.mean - a.mean;
    const double d2 = delta * delta;
    const double d3 = d2 * delta;
    const double d4 = d2 * d2;
    r.mean = a.mean + delta * b.n / r.n;
    r.m2 = a.m2 + b.m2 + d2 * a.n * b.n / r.n;
    r.m3 = a.m3 + b.m3 + d3 * a.n * b.n * (a.n - b.n) / (r.n * r.n) +
           3.0 * delta * (a.n * b.m2 - b.n * a.m2) / r.n;
    r.m4 = a.m4 + b.m4 +
           d4 * a.n * b.n * (a.n * a.n - a.n * b.n + b.n * b.n) / (r.n * r.n * r.n) +
           6.0 * d2 * (a.n * a.n * b.m2 + b.n * b.n * a.m2) / (r.n * r.n) +
           4.0 * delta * (a.n * b.m3 - b.n * a.m3) / r.n;
    return r;
  }
};

// Fixed-shape pairwise tree over chunk indices.
Moments reduce(const std::vector<Moments>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Moments::merge(reduce(parts, lo, mid), reduce(parts, mid, hi));
}

std::size_t chunk_count(std::size_t n) { return (n + kSampleChunk - 1) / kSampleChunk; }

std::size_t chunk_length(std::size_t n, std::size_t chunk) {
  return std::min<std::size_t>(kSampleChunk, n - chunk * kSampleChunk);
}

}  // namespace

bool within_band(double analytic, double estimate, double std_error, double sigmas) {
  return std::fabs(estimate - analytic) <= sigmas * std_error;
}

McEstimate estimate_loss_stats(const ErrorDistribution& d, const LossParams& k, double c,
                               std::size_t n, std::uint64_t seed, unsigned workers) {
  if (n < 1000) throw std::invalid_argument("estimate_loss_stats: n must be at least 1000");
  const std::size_t chunks = chunk_count(n);
  std::vector<Moments> parts(chunks);
  detail::parallel_for(chunks, workers, [&](std::size_t i) {
    Rng rng(chunk_seed(seed, i));
    Moments m;
    const std::size_t len = chunk_length(n, i);
    for (std::size_t j = 0; j < len; ++j) m.push(loss(d.draw(rng) + c, k));
    parts[i] = m;
  });
  const Moments total = reduce(parts, 0, chunks);

  McEstimate est;
  est.n = n;
  est.seed = seed;
  est.mean = total.mean;
  const double nn = total.n;
  est.variance = total.m2 / (nn - 1.0);
  est.std_error_mean = std::sqrt(est.variance / nn);
  const double mu2 = total.m2 / nn;
  const double mu4 = total.m4 / nn;
  est.std_error_variance = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / nn);
  return est;
}

double estimate_quantile(const ErrorDistribution& d, double p, std::size_t n,
                         std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("estimate_quantile: p must lie in (0, 1)");
  if (n < 10000) throw std::invalid_argument("estimate_quantile: n must be at least 10^4");
  std::vector<double> xs = d.sample(n, seed);
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n))) - 1;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(rank), xs.end());
  return xs[rank];
}

}  // namespace asymloss::mc
