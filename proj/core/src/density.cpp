#include "sidebp/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sidebp/error.hpp"
#include "sidebp/parallel.hpp"

namespace sidebp::density {
namespace {

struct Rule {
  std::vector<double> z;
  std::vector<double> weight;
};

// Trapezoid weights phi(z) dz, normalized to sum to one. The integrands are
// analytic in a strip around the real line, so the rule converges
// geometrically in the node count.
const Rule& rule_for(const Quadrature& q) {
  thread_local std::map<std::pair<std::uint32_t, double>, Rule> cache;
  auto [it, inserted] = cache.try_emplace({q.nodes, q.truncation});
  if (inserted) {
    Rule& r = it->second;
    const double h = 2.0 * q.truncation / static_cast<double>(q.nodes - 1);
    double total = 0.0;
    for (std::uint32_t k = 0; k < q.nodes; ++k) {
      const double z = -q.truncation + h * static_cast<double>(k);
      double w = std::exp(-0.5 * z * z);
      if (k == 0 || k + 1 == q.nodes) w *= 0.5;
      r.z.push_back(z);
      r.weight.push_back(w);
      total += w;
    }
    for (double& w : r.weight) w /= total;
  }
  return it->second;
}

// 1/(1 - p + p e^x) - 1, written so that x = 0 gives exactly 0 and large |x|
// neither overflows nor cancels.
double integrand(double x, double p) noexcept {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return p * (e - 1.0) / ((1.0 - p) * e + p);
  }
  const double em1 = std::expm1(x);
  return -p * em1 / (1.0 + p * em1);
}

double prior_bias(double p) { return std::log(p) - std::log1p(-p); }

}  // namespace

void DensityParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p must lie in (0, 1)");
  if (quadrature.nodes < 11) throw ValidationError("quadrature needs at least 11 nodes");
  if (!(quadrature.truncation > 0.0)) throw ValidationError("quadrature truncation must be positive");
}

double q_function(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double big_g(double alpha, const DensityParams& params) {
  if (!(alpha >= 0.0)) throw ValidationError("G is defined for alpha >= 0");
  params.validate();
  const double p = params.p;
  const Rule& rule = rule_for(params.quadrature);
  const double root = std::sqrt(alpha);
  const auto& labels = params.labels;

  double expectation = 0.0;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    const double nu = labels.nu(l);
    if (nu == 0.0) continue;
    if (labels.mu(l) == 0.0) {
      expectation += nu * (1.0 / (1.0 - p) - 1.0);
      continue;
    }
    const double u = labels.log_ratio(l);
    double inner = 0.0;
    for (std::size_t k = 0; k < rule.z.size(); ++k) {
      inner += rule.weight[k] * integrand(u + root * rule.z[k] - 0.5 * alpha, p);
    }
    expectation += nu * inner;
  }
  return params.lambda / (p * p) * expectation;
}

double big_g_derivative(double alpha, const DensityParams& params, double step) {
  if (alpha >= step) {
    return (big_g(alpha + step, params) - big_g(alpha - step, params)) / (2.0 * step);
  }
  return (big_g(alpha + step, params) - big_g(alpha, params)) / step;
}

double alpha1_closed_form(const DensityParams& params) {
  const auto& labels = params.labels;
  double sum = 0.0;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    const double mu = labels.mu(l);
    const double nu = labels.nu(l);
    const double mix = params.p * mu + (1.0 - params.p) * nu;
    if (mix == 0.0) continue;
    sum += (mu - nu) * (mu - nu) / mix;
  }
  return params.lambda * sum;
}

double tilde_alpha1(double lambda, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p must lie in (0, 1)");
  return lambda / (p * (1.0 - p));
}

EvolutionTrace evolve(double alpha0, const DensityParams& params, const EvolveOptions& options) {
  params.validate();
  if (!(alpha0 >= 0.0)) throw ValidationError("alpha0 must be >= 0");
  double max_h2 = 0.0;
  for (std::size_t l = 0; l < params.labels.size(); ++l) {
    const double h = params.labels.log_ratio(l);
    if (std::isfinite(h)) max_h2 = std::max(max_h2, h * h);
  }
  const double bound = 10.0 * (tilde_alpha1(params.lambda, params.p) + max_h2);

  EvolutionTrace trace;
  trace.alpha.push_back(alpha0);
  double current = alpha0;
  for (std::uint32_t step = 0; step < options.max_steps; ++step) {
    const double next = big_g(current, params);
    if (!std::isfinite(next) || next > bound) {
      std::ostringstream msg;
      msg << "density evolution left its bound (alpha = " << next << " > " << bound
          << "); quadrature failure suspected";
      throw NumericalError(msg.str());
    }
    trace.alpha.push_back(next);
    const double change = std::abs(next - current);
    current = next;
    if (change <= options.tolerance) {
      trace.converged = true;
      break;
    }
  }
  trace.limit = current;
  return trace;
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::kStable: return "stable";
    case Stability::kUnstable: return "unstable";
    case Stability::kMarginal: return "marginal";
  }
  return "marginal";
}

FixedPointReport find_fixed_points(const DensityParams& params, const FixedPointOptions& options) {
  params.validate();
  FixedPointReport report;
  report.alpha_max = options.alpha_max.value_or(2.0 * tilde_alpha1(params.lambda, params.p));
  report.grid_step = options.grid_step.value_or(1e-3 * report.alpha_max);
  report.bisection_tolerance = options.bisection_tolerance;
  if (!(report.alpha_max > 0.0) || !(report.grid_step > 0.0)) {
    throw ValidationError("fixed-point search needs positive alpha_max and grid step");
  }

  auto gap = [&](double a) { return big_g(a, params) - a; };
  auto classify = [&](double alpha) {
    FixedPoint fp;
    fp.alpha = alpha;
    fp.derivative = big_g_derivative(alpha, params, options.derivative_step);
    fp.residual = std::abs(gap(alpha));
    const double slope = std::abs(fp.derivative);
    if (slope < 1.0 - options.stability_margin) {
      fp.stability = Stability::kStable;
    } else if (slope > 1.0 + options.stability_margin) {
      fp.stability = Stability::kUnstable;
    } else {
      fp.stability = Stability::kMarginal;
    }
    return fp;
  };

  const double g0 = big_g(0.0, params);
  const bool zero_is_fixed = std::abs(g0) <= options.bisection_tolerance;
  if (zero_is_fixed) report.points.push_back(classify(0.0));

  const auto cells = static_cast<std::size_t>(std::ceil(report.alpha_max / report.grid_step));
  double left = 0.0;
  double left_gap = g0;
  for (std::size_t k = 1; k <= cells; ++k) {
    const double right = std::min(report.alpha_max, static_cast<double>(k) * report.grid_step);
    const double right_gap = gap(right);
    const bool skip_first = zero_is_fixed && k == 1;
    if (!skip_first) {
      if (right_gap == 0.0) {
        report.points.push_back(classify(right));
      } else if ((left_gap < 0.0 && right_gap > 0.0) || (left_gap > 0.0 && right_gap < 0.0)) {
        double lo = left;
        double hi = right;
        double lo_gap = left_gap;
        for (int iter = 0; iter < 200 && hi - lo > options.bisection_tolerance; ++iter) {
          const double mid = 0.5 * (lo + hi);
          const double mid_gap = gap(mid);
          if (mid_gap == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((mid_gap < 0.0) == (lo_gap < 0.0)) {
            lo = mid;
            lo_gap = mid_gap;
          } else {
            hi = mid;
          }
        }
        report.points.push_back(classify(0.5 * (lo + hi)));
      }
    }
    left = right;
    left_gap = right_gap;
  }
  return report;
}

double predicted_success(double alpha, const DensityParams& params, bool include_prior_bias) {
  if (!(alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
  const double shift = include_prior_bias ? prior_bias(params.p) : 0.0;
  const auto& labels = params.labels;
  double total = 0.0;
  if (alpha == 0.0) {
    for (std::size_t l = 0; l < labels.size(); ++l) {
      const double mu = labels.mu(l);
      const double nu = labels.nu(l);
      const double x = labels.log_ratio(l) + shift;
      if (x > 0.0) {
        total += mu;
      } else if (x < 0.0) {
        total += nu;
      } else {
        total += 0.5 * (mu + nu);
      }
    }
    return total - 1.0;
  }
  const double root = std::sqrt(alpha);
  for (std::size_t l = 0; l < labels.size(); ++l) {
    const double u = labels.log_ratio(l);
    if (labels.mu(l) > 0.0) total += labels.mu(l) * q_function((-u - shift - 0.5 * alpha) / root);
    if (labels.nu(l) > 0.0) total += labels.nu(l) * q_function((u + shift - 0.5 * alpha) / root);
  }
  return total - 1.0;
}

SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "p") return SweepVariable::kP;
  if (name == "lambda") return SweepVariable::kLambda;
  if (name == "beta") return SweepVariable::kBeta;
  throw ValidationError("sweep variable must be one of p, lambda, beta");
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kP: return "p";
    case SweepVariable::kLambda: return "lambda";
    case SweepVariable::kBeta: return "beta";
  }
  return "p";
}

std::vector<SweepRow> predict_bp_curve(const SweepSpec& spec) {
  if (spec.steps < 1) throw ValidationError("sweep needs at least one step");
  if (spec.variable == SweepVariable::kBeta && !spec.label_family) {
    throw ValidationError("beta sweep needs a label family");
  }
  std::vector<SweepRow> rows(spec.steps);
  parallel_for(spec.steps, spec.threads, [&](std::size_t k) {
    const double value =
        spec.steps == 1 ? spec.from
                        : spec.from + (spec.to - spec.from) * static_cast<double>(k) /
                                          static_cast<double>(spec.steps - 1);
    DensityParams cell = spec.base;
    switch (spec.variable) {
      case SweepVariable::kP: cell.p = value; break;
      case SweepVariable::kLambda: cell.lambda = value; break;
      case SweepVariable::kBeta: cell.labels = spec.label_family(value); break;
    }
    cell.validate();
    SweepRow& row = rows[k];
    row.value = value;
    row.alpha_bp = evolve(0.0, cell).limit;
    row.alpha_opt = evolve(tilde_alpha1(cell.lambda, cell.p), cell).limit;
    row.success_bp = predicted_success(row.alpha_bp, cell, spec.include_prior_bias);
    row.success_opt = predicted_success(row.alpha_opt, cell, spec.include_prior_bias);
    row.fixed_point_count = find_fixed_points(cell).points.size();
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepVariable variable, const std::vector<SweepRow>& rows) {
  out.precision(12);
  out << to_string(variable)
      << ",alpha_bp,alpha_opt,success_bp,success_opt,fixed_point_count\n";
  for (const auto& row : rows) {
    out << row.value << ',' << row.alpha_bp << ',' << row.alpha_opt << ',' << row.success_bp << ','
        << row.success_opt << ',' << row.fixed_point_count << '\n';
  }
}

}  // namespace sidebp::density
