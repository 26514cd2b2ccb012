#include "sidebp/sbm_params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sidebp/error.hpp"

namespace sidebp {

bool validate_balance(const SbmParams& params) noexcept {
  const double p = params.p;
  return std::abs(p * params.a + (1.0 - p) * params.b - 1.0) <= 1e-9 &&
         std::abs(p * params.b + (1.0 - p) * params.c - 1.0) <= 1e-9;
}

void SbmParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p must lie in (0, 1)");
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) throw ValidationError("affinities a, b, c must be >= 0");
  if (!(d > 0.0) || !std::isfinite(d)) throw ValidationError("mean degree d must be positive");
  if (n < 1) throw ValidationError("n must be >= 1");
  if (!validate_balance(*this)) {
    std::ostringstream msg;
    msg << "degree balance violated: pa+(1-p)b = " << p * a + (1.0 - p) * b
        << ", pb+(1-p)c = " << p * b + (1.0 - p) * c;
    throw ValidationError(msg.str());
  }
  const double worst = std::max({prob_plus_plus(), prob_plus_minus(), prob_minus_minus()});
  // A single vertex has no pairs, so no probability is ever used.
  if (n > 1 && worst > 1.0) {
    std::ostringstream msg;
    msg << "edge probability " << worst << " exceeds 1; n = " << n
        << " is too small for mean degree " << d;
    throw ValidationError(msg.str());
  }
}

SbmParams params_from_scaling(const ScalingParams& scaling, std::uint64_t n) {
  const double p = scaling.p;
  const double eps = scaling.epsilon;
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p must lie in (0, 1)");
  if (!(scaling.lambda > 0.0) || !std::isfinite(scaling.lambda)) {
    throw ValidationError("lambda must be positive");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");

  SbmParams params;
  params.p = p;
  params.a = 1.0 + eps * (1.0 - p) / p;
  params.b = 1.0 - eps;
  params.c = 1.0 + eps * p / (1.0 - p);
  params.d = scaling.lambda / (eps * eps);
  params.n = n;
  params.validate();
  return params;
}

}  // namespace sidebp
