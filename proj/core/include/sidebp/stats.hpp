#pragma once

#include <cstddef>
#include <span>

namespace sidebp::stats {

/// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> values);

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;        ///< unbiased sample variance
  double standard_error = 0.0;  ///< sqrt(variance / count)
};

Moments summarize(std::span<const double> values);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
/// distribution (Stephens' small-sample correction). Ties are handled by
/// advancing both samples past equal values before comparing the CDFs.
KsResult ks_two_sample(std::span<const double> first, std::span<const double> second);

/// Upper tail of the Kolmogorov distribution, P(K > x).
double kolmogorov_tail(double x);

}  // namespace sidebp::stats
