#pragma once

#include <cstdint>

namespace sidebp {

/// Two-community SBM with edge probabilities d*a/n (++), d*b/n (+-) and
/// d*c/n (--), and P(spin = +) = p.
struct SbmParams {
  double p = 0.5;
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double d = 1.0;
  std::uint64_t n = 1;

  /// Throws ValidationError on range violations, unbalanced degrees, or an
  /// edge probability above 1.
  void validate() const;

  double prob_plus_plus() const { return d * a / static_cast<double>(n); }
  double prob_plus_minus() const { return d * b / static_cast<double>(n); }
  double prob_minus_minus() const { return d * c / static_cast<double>(n); }

  /// Probability that a child of a `parent_plus` vertex is +, in the local
  /// branching limit: row(+) = (pa, (1-p)b), row(-) = (pb, (1-p)c), each row
  /// summing to 1 under degree balance.
  double child_plus_probability(bool parent_plus) const {
    const double plus = parent_plus ? p * a : p * b;
    const double minus = parent_plus ? (1.0 - p) * b : (1.0 - p) * c;
    return plus / (plus + minus);
  }
};

/// Signal-strength view of the same model: lambda = d * (1-b)^2, b = 1 - epsilon.
struct ScalingParams {
  double p = 0.5;
  double lambda = 1.0;
  double epsilon = 0.1;
};

/// a = 1 + eps(1-p)/p, b = 1 - eps, c = 1 + eps p/(1-p), d = lambda/eps^2.
/// Throws ValidationError on out-of-range inputs or when n is too small for
/// the requested density (an edge probability would exceed 1).
SbmParams params_from_scaling(const ScalingParams& scaling, std::uint64_t n);

/// True iff pa + (1-p)b and pb + (1-p)c both equal 1 within 1e-9.
bool validate_balance(const SbmParams& params) noexcept;

}  // namespace sidebp
