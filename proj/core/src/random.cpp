#include "sidebp/random.hpp"

#include <algorithm>
#include <cmath>

#include "sidebp/error.hpp"

namespace sidebp {

PoissonTable::PoissonTable(double mean) : mean_(mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ValidationError("Poisson mean must be >= 0");
  const double spread = 12.0 * std::sqrt(mean) + 12.0;
  lo_ = static_cast<std::uint64_t>(std::max(0.0, std::floor(mean - spread)));
  const auto hi = static_cast<std::uint64_t>(std::ceil(mean + spread));
  const std::size_t width = hi - lo_ + 1;

  std::vector<double> pmf(width);
  double total = 0.0;
  for (std::size_t k = 0; k < width; ++k) {
    const double x = static_cast<double>(lo_ + k);
    pmf[k] = mean == 0.0 ? (x == 0.0 ? 1.0 : 0.0)
                         : std::exp(x * std::log(mean) - mean - std::lgamma(x + 1.0));
    total += pmf[k];
  }

  // Vose's alias construction on the scaled pmf.
  std::vector<double> prob(width, 0.0);
  alias_.assign(width, 0);
  std::vector<double> scaled(width);
  std::vector<std::uint32_t> small, large;
  for (std::size_t k = 0; k < width; ++k) {
    scaled[k] = pmf[k] / total * static_cast<double>(width);
    (scaled[k] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(k));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto k : large) prob[k] = 1.0;
  for (auto k : small) prob[k] = 1.0;

  threshold_.resize(width);
  for (std::size_t k = 0; k < width; ++k) {
    threshold_[k] = static_cast<std::uint64_t>(std::ldexp(std::clamp(prob[k], 0.0, 1.0), 32));
  }
}

}  // namespace sidebp
