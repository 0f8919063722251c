#pragma once

#include <cstddef>
#include <cstdint>

#include "asymloss/distributions.hpp"
#include "asymloss/loss_model.hpp"

namespace asymloss::mc {

struct McEstimate {
  double mean = 0.0;
  double variance = 0.0;           // unbiased sample variance
  double std_error_mean = 0.0;     // sqrt(variance / n)
  double std_error_variance = 0.0; // from the fourth central moment
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// True when |estimate − analytic| <= sigmas · std_error.
bool within_band(double analytic, double estimate, double std_error, double sigmas);

/// Monte Carlo estimate of E[L(Z + c)] and Var[L(Z + c)]. Samples are drawn
/// in fixed chunks of 2^16 with per-chunk seeds and reduced in a fixed
/// pairwise order, so the result is bit-identical for any worker count.
/// Throws std::invalid_argument for n < 1000.
McEstimate estimate_loss_stats(const ErrorDistribution& d, const LossParams& k, double c,
                               std::size_t n, std::uint64_t seed, unsigned workers = 0);

/// Order-statistic estimate of the p-quantile. Throws unless 0 < p < 1 and
/// n >= 10^4.
double estimate_quantile(const ErrorDistribution& d, double p, std::size_t n,
                         std::uint64_t seed);

}  // namespace asymloss::mc
