#pragma once

// Large-degree theory of the labeled BP recursion.
//
// In the regime d -> infinity with lambda = d(1-b)^2 fixed, the root statistic
// of the depth-t recursion is asymptotically U + w +- N(alpha_t/2, alpha_t),
// where alpha_t follows the scalar map alpha_t = G(alpha_{t-1}) from
// alpha_0 = 0 and
//
//   G(alpha) = lambda/p^2 * E[ 1/(1 - p + p exp(U_- + sqrt(alpha) Z - alpha/2)) - 1 ],
//
// Z ~ N(0,1), U_- = log(mu/nu)(L) with L ~ nu.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sidebp/label_model.hpp"

namespace sidebp::density {

/// Trapezoidal rule for E[g(Z)] on [-truncation, truncation].
struct Quadrature {
  std::uint32_t nodes = 201;
  double truncation = 8.0;
};

struct DensityParams {
  double lambda = 1.0;
  double p = 0.5;
  LabelModel labels = LabelModel::uninformative();
  Quadrature quadrature{};

  void validate() const;
};

/// Upper standard normal tail, 0.5 * erfc(x / sqrt 2).
double q_function(double x) noexcept;

double big_g(double alpha, const DensityParams& params);

/// Centered finite difference of G (forward difference near alpha = 0).
double big_g_derivative(double alpha, const DensityParams& params, double step = 1e-5);

/// G(0) in closed form: lambda * sum (mu - nu)^2 / (p mu + (1-p) nu).
double alpha1_closed_form(const DensityParams& params);

/// First-step signal when the spins at depth t are revealed: lambda / (p(1-p)).
double tilde_alpha1(double lambda, double p);

struct EvolutionTrace {
  std::vector<double> alpha;  ///< alpha_0 .. alpha_T
  bool converged = false;
  double limit = 0.0;
};

struct EvolveOptions {
  std::uint32_t max_steps = 10000;
  double tolerance = 1e-10;
};

/// Iterates alpha <- G(alpha) until successive values differ by at most the
/// tolerance. Throws NumericalError if alpha leaves the a-priori bound
/// 10 * (lambda/(p(1-p)) + max finite h^2).
EvolutionTrace evolve(double alpha0, const DensityParams& params, const EvolveOptions& options = {});

enum class Stability { kStable, kUnstable, kMarginal };

std::string to_string(Stability s);

struct FixedPoint {
  double alpha = 0.0;
  Stability stability = Stability::kMarginal;
  double derivative = 0.0;  ///< numeric G'(alpha)
  double residual = 0.0;    ///< |G(alpha) - alpha|
};

struct FixedPointReport {
  std::vector<FixedPoint> points;  ///< ascending
  double alpha_max = 0.0;
  double grid_step = 0.0;
  double bisection_tolerance = 0.0;
};

struct FixedPointOptions {
  std::optional<double> alpha_max;   ///< default 2 * tilde_alpha1
  std::optional<double> grid_step;   ///< default 1e-3 * alpha_max
  double bisection_tolerance = 1e-10;
  double derivative_step = 1e-5;
  double stability_margin = 0.02;
};

/// Scans G(alpha) - alpha for sign changes on a uniform grid over
/// [0, alpha_max] and refines each by bisection. alpha = 0 counts as a fixed
/// point iff |G(0)| <= bisection tolerance. Tangential roots without a sign
/// change are not detected.
FixedPointReport find_fixed_points(const DensityParams& params, const FixedPointOptions& options = {});

/// Asymptotic success of the sign rule on the depth-t statistic:
///   E[Q((-U_+ - w' - alpha/2)/sqrt alpha)] + E[Q((U_- + w' - alpha/2)/sqrt alpha)] - 1
/// with w' = log(p/(1-p)) when include_prior_bias, else 0. At alpha = 0 the
/// analytic limit (indicator form) is returned.
double predicted_success(double alpha, const DensityParams& params, bool include_prior_bias = true);

enum class SweepVariable { kP, kLambda, kBeta };

SweepVariable parse_sweep_variable(const std::string& name);
std::string to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::kP;
  double from = 0.05;
  double to = 0.95;
  std::uint32_t steps = 10;  ///< number of cells, endpoints included
  DensityParams base{};      ///< fixed values of the non-swept parameters
  /// Label model as a function of beta; used when variable == kBeta.
  std::function<LabelModel(double)> label_family;
  bool include_prior_bias = true;
  unsigned threads = 1;
};

struct SweepRow {
  double value = 0.0;
  double alpha_bp = 0.0;     ///< limit of evolve from 0
  double alpha_opt = 0.0;    ///< limit of evolve from tilde_alpha1
  double success_bp = 0.0;
  double success_opt = 0.0;
  std::size_t fixed_point_count = 0;
};

std::vector<SweepRow> predict_bp_curve(const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, SweepVariable variable, const std::vector<SweepRow>& rows);

}  // namespace sidebp::density
