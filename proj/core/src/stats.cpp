#include "sidebp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sidebp/error.hpp"

namespace sidebp::stats {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Moments summarize(std::span<const double> values) {
  Moments m;
  m.count = values.size();
  if (m.count == 0) return m;
  m.mean = pairwise_sum(values) / static_cast<double>(m.count);
  if (m.count > 1) {
    std::vector<double> squares(values.size());
    std::transform(values.begin(), values.end(), squares.begin(),
                   [&](double v) { return (v - m.mean) * (v - m.mean); });
    m.variance = pairwise_sum(squares) / static_cast<double>(m.count - 1);
    m.standard_error = std::sqrt(m.variance / static_cast<double>(m.count));
  }
  return m;
}

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> first, std::span<const double> second) {
  if (first.empty() || second.empty()) throw ValidationError("KS test needs two nonempty samples");
  std::vector<double> x(first.begin(), first.end());
  std::vector<double> y(second.begin(), second.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double ne = std::sqrt(nx * ny / (nx + ny));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

}  // namespace sidebp::stats
