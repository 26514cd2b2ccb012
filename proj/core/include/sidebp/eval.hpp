#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sidebp/bp.hpp"
#include "sidebp/density.hpp"
#include "sidebp/error.hpp"
#include "sidebp/graph.hpp"
#include "sidebp/label_model.hpp"
#include "sidebp/sbm_params.hpp"
#include "sidebp/stats.hpp"

namespace sidebp::eval {

struct SuccessEstimate {
  double estimate = 0.0;  ///< acc_plus + acc_minus - 1
  double standard_error = 0.0;
  double acc_plus = 0.0;
  double acc_minus = 0.0;
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
};

/// Balanced success of `estimates` against `truth`. Throws ValidationError
/// on length mismatch or when a class is absent from `truth`.
SuccessEstimate empirical_success(std::span<const Spin> estimates, std::span<const Spin> truth);

/// + iff mu(L_i) > nu(L_i).
std::vector<Spin> label_only_baseline(const LabeledGraph& graph, const LabelModel& labels);

/// |empirical success|: agreement up to a global spin flip.
double overlap_up_to_flip(std::span<const Spin> estimates, std::span<const Spin> truth);

struct TreeMomentSpec {
  ScalingParams scaling{0.5, 0.8, 0.01};
  LabelModel labels = LabelModel::uninformative();
  std::uint32_t depth = 1;
  std::uint64_t trials = 100000;  ///< per root spin
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double llr_cap = 30.0;
  density::Quadrature quadrature{};
};

struct TreeSideReport {
  stats::Moments gamma;     ///< gamma_r = xi_r - h(L_root) - w
  double theory_mean = 0.0; ///< +alpha_r/2 (root +) or -alpha_r/2 (root -)
  double z_mean = 0.0;      ///< (mean - theory_mean) / SE
  double variance_relative_error = 0.0;
  double sign_accuracy = 0.0;  ///< fraction of trials with correct sign decision
};

struct TreeMomentReport {
  std::uint32_t depth = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double d = 0.0;
  double alpha = 0.0;  ///< alpha_r from density evolution
  TreeSideReport plus;
  TreeSideReport minus;
  SuccessEstimate sign_rule;       ///< xi_r >= 0 rule on both root classes
  double predicted_success = 0.0;  ///< density::predicted_success(alpha_r)
};

/// Samples trees with forced root spins (compact sampler, d may be large),
/// trials per spin, and compares gamma_r moments with (+-alpha_r/2, alpha_r).
/// Trials are split into blocks with seeds derive_seed(seed, block), so
/// results do not depend on the thread count.
TreeMomentReport tree_moment_check(const TreeMomentSpec& spec);

struct EndToEndSpec {
  ScalingParams scaling{0.5, 0.8, 0.2};
  std::uint64_t n = 100000;
  LabelModel labels = LabelModel::uninformative();
  bp::BpConfig bp{};
  std::uint32_t graphs = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  density::Quadrature quadrature{};
};

struct EndToEndTrial {
  std::uint64_t seed = 0;
  SuccessEstimate bp;
  SuccessEstimate baseline;
};

struct EndToEndReport {
  std::vector<EndToEndTrial> trials;
  stats::Moments bp_success;        ///< across graphs
  stats::Moments baseline_success;  ///< across graphs
  double alpha_t = 0.0;
  double predicted_success = 0.0;
  double dtv = 0.0;
};

EndToEndReport sbm_end_to_end(const EndToEndSpec& spec);

/// Parameters outside 2(a+b) < (a-b)^2 < 4(a+b).
class RegimeError : public ValidationError {
 public:
  RegimeError(double lower, double middle, double upper);
  double lower;
  double middle;
  double upper;
};

enum class Example1Detector { kSpectral, kSeededBp };

struct Example1Spec {
  double a = 6.0;
  double b = 1.0;
  std::uint32_t n = 8000;  ///< multiple of 4
  std::uint32_t graphs = 10;
  std::uint64_t seed = 1;
  Example1Detector detector = Example1Detector::kSpectral;
  std::uint32_t spectral_iterations = 1000;
  std::uint32_t bp_rounds = 5;
  double seed_flip_rate = 0.1;
  unsigned threads = 1;
};

/// The four-community graph: blocks of n/4, within-block probability 2a/n,
/// 1-2 and 3-4 pairs 2b/n, other pairs (a+b)/n; label 0 on blocks 1-2 and
/// label 1 on blocks 3-4; spins + on blocks 1, 3 and - on 2, 4.
LabeledGraph example1_graph(double a, double b, std::uint32_t n, std::uint64_t seed);

struct Example1Trial {
  std::uint64_t seed = 0;
  std::vector<double> overlap;  ///< per label group
  std::vector<double> control;  ///< same estimates against shuffled spins
};

struct Example1Report {
  double lower = 0.0;   ///< 2(a+b)
  double middle = 0.0;  ///< (a-b)^2
  double upper = 0.0;   ///< 4(a+b)
  std::vector<Example1Trial> trials;
  stats::Moments overlap;  ///< over all groups and graphs
  stats::Moments control;
};

/// Throws RegimeError when the parameters leave the regime.
void check_example1_regime(double a, double b);

Example1Report example1_experiment(const Example1Spec& spec);

enum class FigureKind { kGCurve, kSuccVsP, kSuccVsLambda, kBpVsLabels };

FigureKind parse_figure_kind(const std::string& name);
std::string to_string(FigureKind kind);

struct FigureSpec {
  density::DensityParams base{};
  std::string label_family = "noisy";  ///< "noisy" or "revealed" for beta grids
  double from = 0.0;
  double to = 1.0;
  std::uint32_t steps = 101;
  bool include_prior_bias = true;
  unsigned threads = 1;
};

/// Writes the figure data as CSV with a header row. Columns:
///   G_curve:        alpha,G,G_minus_alpha
///   succ_vs_p:      p,alpha_bp,alpha_opt,success_bp,success_opt,fixed_point_count
///   succ_vs_lambda: lambda,...same
///   bp_vs_labels:   beta,alpha_bp,success_bp,success_labels,success_opt
void figure_sweep(FigureKind kind, const FigureSpec& spec, std::ostream& out);

}  // namespace sidebp::eval
