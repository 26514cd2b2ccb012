#include "sidebp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "sidebp/learn.hpp"
#include "sidebp/parallel.hpp"
#include "sidebp/random.hpp"
#include "sidebp/sampling.hpp"
#include "sidebp/tree_monte_carlo.hpp"

namespace sidebp::eval {

SuccessEstimate empirical_success(std::span<const Spin> estimates, std::span<const Spin> truth) {
  if (estimates.size() != truth.size()) {
    throw ValidationError("estimates and true spins differ in length");
  }
  std::uint64_t hit_plus = 0;
  std::uint64_t hit_minus = 0;
  SuccessEstimate out;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == kPlus) {
      ++out.n_plus;
      if (estimates[i] == kPlus) ++hit_plus;
    } else {
      ++out.n_minus;
      if (estimates[i] != kPlus) ++hit_minus;
    }
  }
  if (out.n_plus == 0 || out.n_minus == 0) {
    throw ValidationError("success is undefined when a community is absent");
  }
  out.acc_plus = static_cast<double>(hit_plus) / out.n_plus;
  out.acc_minus = static_cast<double>(hit_minus) / out.n_minus;
  out.estimate = out.acc_plus + out.acc_minus - 1.0;
  out.standard_error = std::sqrt(out.acc_plus * (1.0 - out.acc_plus) / out.n_plus +
                                 out.acc_minus * (1.0 - out.acc_minus) / out.n_minus);
  return out;
}

std::vector<Spin> label_only_baseline(const LabeledGraph& graph, const LabelModel& labels) {
  std::vector<Spin> out(graph.num_vertices());
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    const LabelId l = graph.label(v);
    out[v] = labels.mu(l) > labels.nu(l) ? kPlus : kMinus;
  }
  return out;
}

double overlap_up_to_flip(std::span<const Spin> estimates, std::span<const Spin> truth) {
  return std::abs(empirical_success(estimates, truth).estimate);
}

namespace {

constexpr std::uint64_t kBlockTrials = 1000;

// Effectively infinite n for tree-only uses of SbmParams.
constexpr std::uint64_t kTreeN = std::uint64_t{1} << 50;

density::DensityParams density_params(const ScalingParams& s, const LabelModel& labels,
                                      const density::Quadrature& q) {
  density::DensityParams dp;
  dp.lambda = s.lambda;
  dp.p = s.p;
  dp.labels = labels;
  dp.quadrature = q;
  return dp;
}

double alpha_after(std::uint32_t steps, const density::DensityParams& dp) {
  density::EvolveOptions opts;
  opts.max_steps = steps;
  opts.tolerance = -1.0;
  return density::evolve(0.0, dp, opts).alpha.back();
}

TreeSideReport summarize_side(const std::vector<double>& gamma, const std::vector<double>& xi,
                              Spin root, double alpha) {
  TreeSideReport side;
  side.gamma = stats::summarize(gamma);
  side.theory_mean = root == kPlus ? 0.5 * alpha : -0.5 * alpha;
  side.z_mean = side.gamma.standard_error > 0.0
                    ? (side.gamma.mean - side.theory_mean) / side.gamma.standard_error
                    : 0.0;
  side.variance_relative_error = alpha > 0.0 ? std::abs(side.gamma.variance - alpha) / alpha
                                             : side.gamma.variance;
  std::uint64_t correct = 0;
  for (double x : xi) {
    if ((x >= 0.0) == (root == kPlus)) ++correct;
  }
  side.sign_accuracy = static_cast<double>(correct) / static_cast<double>(xi.size());
  return side;
}

}  // namespace

TreeMomentReport tree_moment_check(const TreeMomentSpec& spec) {
  if (spec.depth < 1) throw ValidationError("tree depth must be >= 1");
  if (spec.trials < 1) throw ValidationError("trial count must be >= 1");
  const SbmParams params = params_from_scaling(spec.scaling, kTreeN);
  const TreeStatisticSampler sampler(params, spec.labels, spec.depth, spec.llr_cap);
  const auto dp = density_params(spec.scaling, spec.labels, spec.quadrature);

  TreeMomentReport report;
  report.depth = spec.depth;
  report.trials = spec.trials;
  report.seed = spec.seed;
  report.d = params.d;
  report.alpha = alpha_after(spec.depth, dp);

  const std::uint64_t blocks = (spec.trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<double> gamma[2];
  std::vector<double> xi[2];
  for (int side = 0; side < 2; ++side) {
    gamma[side].resize(spec.trials);
    xi[side].resize(spec.trials);
    const Spin root = side == 0 ? kPlus : kMinus;
    parallel_for(blocks, spec.threads, [&](std::size_t block) {
      Rng rng = make_rng(derive_seed(spec.seed, (static_cast<std::uint64_t>(side) << 32) | block));
      const std::uint64_t begin = block * kBlockTrials;
      const std::uint64_t end = std::min(spec.trials, begin + kBlockTrials);
      for (std::uint64_t i = begin; i < end; ++i) {
        const auto s = sampler(root, rng);
        xi[side][i] = s.xi;
        gamma[side][i] = s.xi - s.field;
      }
    });
  }
  report.plus = summarize_side(gamma[0], xi[0], kPlus, report.alpha);
  report.minus = summarize_side(gamma[1], xi[1], kMinus, report.alpha);

  SuccessEstimate& sr = report.sign_rule;
  sr.n_plus = spec.trials;
  sr.n_minus = spec.trials;
  sr.acc_plus = report.plus.sign_accuracy;
  sr.acc_minus = report.minus.sign_accuracy;
  sr.estimate = sr.acc_plus + sr.acc_minus - 1.0;
  sr.standard_error = std::sqrt(sr.acc_plus * (1.0 - sr.acc_plus) / sr.n_plus +
                                sr.acc_minus * (1.0 - sr.acc_minus) / sr.n_minus);
  report.predicted_success = density::predicted_success(report.alpha, dp, true);
  return report;
}

EndToEndReport sbm_end_to_end(const EndToEndSpec& spec) {
  if (spec.graphs < 1) throw ValidationError("need at least one graph");
  spec.bp.validate();
  const SbmParams params = params_from_scaling(spec.scaling, spec.n);
  const auto dp = density_params(spec.scaling, spec.labels, spec.quadrature);

  EndToEndReport report;
  report.trials.resize(spec.graphs);
  parallel_for(spec.graphs, spec.threads, [&](std::size_t k) {
    EndToEndTrial& trial = report.trials[k];
    trial.seed = derive_seed(spec.seed, k);
    const LabeledGraph graph = sample_sbm(params, spec.labels, trial.seed);
    const auto result = bp::run_bp(graph, params, spec.labels, spec.bp);
    trial.bp = empirical_success(result.estimates, graph.spins());
    trial.baseline = empirical_success(label_only_baseline(graph, spec.labels), graph.spins());
  });
  std::vector<double> bp_values;
  std::vector<double> baseline_values;
  for (const auto& t : report.trials) {
    bp_values.push_back(t.bp.estimate);
    baseline_values.push_back(t.baseline.estimate);
  }
  report.bp_success = stats::summarize(bp_values);
  report.baseline_success = stats::summarize(baseline_values);
  report.alpha_t = alpha_after(spec.bp.depth, dp);
  report.predicted_success =
      density::predicted_success(report.alpha_t, dp, spec.bp.include_prior_bias_in_decision);
  report.dtv = dtv_labels(spec.labels);
  return report;
}

namespace {

std::string regime_message(double lower, double middle, double upper) {
  std::ostringstream msg;
  msg << "parameters outside 2(a+b) < (a-b)^2 < 4(a+b): " << lower << " < " << middle << " < "
      << upper << " fails";
  return msg.str();
}

}  // namespace

RegimeError::RegimeError(double lo, double mid, double up)
    : ValidationError(regime_message(lo, mid, up)), lower(lo), middle(mid), upper(up) {}

void check_example1_regime(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw ValidationError("a and b must be nonnegative");
  const double lower = 2.0 * (a + b);
  const double middle = (a - b) * (a - b);
  const double upper = 4.0 * (a + b);
  if (!(lower < middle && middle < upper)) throw RegimeError(lower, middle, upper);
}

LabeledGraph example1_graph(double a, double b, std::uint32_t n, std::uint64_t seed) {
  if (n < 4 || n % 4 != 0) throw ValidationError("n must be a positive multiple of 4");
  const double scale = 1.0 / static_cast<double>(n);
  const double within = 2.0 * a * scale;
  const double pair = 2.0 * b * scale;
  const double cross = (a + b) * scale;
  if (within > 1.0 || pair > 1.0 || cross > 1.0) {
    throw ValidationError("n too small: an edge probability exceeds 1");
  }
  const std::vector<std::vector<double>> probs = {{within, pair, cross, cross},
                                                  {pair, within, cross, cross},
                                                  {cross, cross, within, pair},
                                                  {cross, cross, pair, within}};
  const std::uint32_t quarter = n / 4;
  const std::vector<std::uint32_t> sizes(4, quarter);
  Rng rng = make_rng(seed);
  const auto edges = sample_block_edges(sizes, probs, rng);
  std::vector<LabelId> labels(n);
  std::vector<Spin> spins(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::uint32_t block = v / quarter;
    labels[v] = block < 2 ? 0 : 1;
    spins[v] = block % 2 == 0 ? kPlus : kMinus;
  }
  return LabeledGraph(n, edges, std::move(labels), 2, std::move(spins));
}

namespace {

std::vector<Spin> detect(const LabeledGraph& group, const Example1Spec& spec, std::uint64_t seed) {
  if (spec.detector == Example1Detector::kSpectral) {
    return learn::spectral_partition(group, spec.spectral_iterations, seed).spins;
  }
  // BP with no label information, started from a noisy copy of the truth.
  Rng rng = make_rng(seed);
  const double strength = std::log((1.0 - spec.seed_flip_rate) / spec.seed_flip_rate);
  std::vector<double> field(group.num_vertices());
  for (VertexId v = 0; v < group.num_vertices(); ++v) {
    const bool flip = uniform01(rng) < spec.seed_flip_rate;
    const double s = group.spin(v) == kPlus ? 1.0 : -1.0;
    field[v] = (flip ? -s : s) * strength;
  }
  bp::ChannelFunctions channel;
  channel.a = 2.0 * spec.a / (spec.a + spec.b);
  channel.b = 2.0 * spec.b / (spec.a + spec.b);
  channel.c = channel.a;
  channel.w = 0.0;
  bp::BpConfig config;
  config.depth = spec.bp_rounds;
  return bp::run_bp_with_fields(group, channel, field, config).estimates;
}

}  // namespace

Example1Report example1_experiment(const Example1Spec& spec) {
  check_example1_regime(spec.a, spec.b);
  if (spec.graphs < 1) throw ValidationError("need at least one graph");
  if (spec.detector == Example1Detector::kSeededBp &&
      !(spec.seed_flip_rate > 0.0 && spec.seed_flip_rate < 0.5)) {
    throw ValidationError("seed flip rate must lie in (0, 0.5)");
  }
  Example1Report report;
  report.lower = 2.0 * (spec.a + spec.b);
  report.middle = (spec.a - spec.b) * (spec.a - spec.b);
  report.upper = 4.0 * (spec.a + spec.b);
  report.trials.resize(spec.graphs);

  parallel_for(spec.graphs, spec.threads, [&](std::size_t g) {
    Example1Trial& trial = report.trials[g];
    trial.seed = derive_seed(spec.seed, g);
    const LabeledGraph graph = example1_graph(spec.a, spec.b, spec.n, trial.seed);
    const auto blocks = learn::kernel_split(graph);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const LabeledGraph& group = blocks[k].graph;
      const auto estimates = detect(group, spec, derive_seed(trial.seed, 100 + k));
      trial.overlap.push_back(overlap_up_to_flip(estimates, group.spins()));

      std::vector<Spin> shuffled = group.spins();
      Rng rng = make_rng(derive_seed(trial.seed, 200 + k));
      for (std::size_t i = shuffled.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng() % i);
        std::swap(shuffled[i - 1], shuffled[j]);
      }
      trial.control.push_back(overlap_up_to_flip(estimates, shuffled));
    }
  });

  std::vector<double> overlaps;
  std::vector<double> controls;
  for (const auto& t : report.trials) {
    overlaps.insert(overlaps.end(), t.overlap.begin(), t.overlap.end());
    controls.insert(controls.end(), t.control.begin(), t.control.end());
  }
  report.overlap = stats::summarize(overlaps);
  report.control = stats::summarize(controls);
  return report;
}

FigureKind parse_figure_kind(const std::string& name) {
  if (name == "G_curve") return FigureKind::kGCurve;
  if (name == "succ_vs_p") return FigureKind::kSuccVsP;
  if (name == "succ_vs_lambda") return FigureKind::kSuccVsLambda;
  if (name == "bp_vs_labels") return FigureKind::kBpVsLabels;
  throw ValidationError("figure kind must be one of G_curve, succ_vs_p, succ_vs_lambda, bp_vs_labels");
}

std::string to_string(FigureKind kind) {
  switch (kind) {
    case FigureKind::kGCurve: return "G_curve";
    case FigureKind::kSuccVsP: return "succ_vs_p";
    case FigureKind::kSuccVsLambda: return "succ_vs_lambda";
    case FigureKind::kBpVsLabels: return "bp_vs_labels";
  }
  return "G_curve";
}

namespace {

LabelModel family_member(const std::string& family, double beta) {
  if (family == "noisy") return LabelModel::noisy(beta);
  if (family == "revealed") return LabelModel::revealed(beta);
  throw ValidationError("label family must be noisy or revealed");
}

double grid_value(const FigureSpec& spec, std::uint32_t k) {
  if (spec.steps == 1) return spec.from;
  return spec.from + (spec.to - spec.from) * static_cast<double>(k) / (spec.steps - 1);
}

}  // namespace

void figure_sweep(FigureKind kind, const FigureSpec& spec, std::ostream& out) {
  if (spec.steps < 1) throw ValidationError("figure grid needs at least one step");
  spec.base.validate();
  out.precision(12);
  switch (kind) {
    case FigureKind::kGCurve: {
      if (!(spec.from >= 0.0) || !(spec.to >= spec.from)) {
        throw ValidationError("alpha grid must satisfy 0 <= from <= to");
      }
      std::vector<double> g(spec.steps);
      parallel_for(spec.steps, spec.threads, [&](std::size_t k) {
        g[k] = density::big_g(grid_value(spec, static_cast<std::uint32_t>(k)), spec.base);
      });
      out << "alpha,G,G_minus_alpha\n";
      for (std::uint32_t k = 0; k < spec.steps; ++k) {
        const double alpha = grid_value(spec, k);
        out << alpha << ',' << g[k] << ',' << g[k] - alpha << '\n';
      }
      return;
    }
    case FigureKind::kSuccVsP:
    case FigureKind::kSuccVsLambda: {
      density::SweepSpec sweep;
      sweep.variable =
          kind == FigureKind::kSuccVsP ? density::SweepVariable::kP : density::SweepVariable::kLambda;
      sweep.from = spec.from;
      sweep.to = spec.to;
      sweep.steps = spec.steps;
      sweep.base = spec.base;
      sweep.include_prior_bias = spec.include_prior_bias;
      sweep.threads = spec.threads;
      density::write_sweep_csv(out, sweep.variable, density::predict_bp_curve(sweep));
      return;
    }
    case FigureKind::kBpVsLabels: {
      density::SweepSpec sweep;
      sweep.variable = density::SweepVariable::kBeta;
      sweep.from = spec.from;
      sweep.to = spec.to;
      sweep.steps = spec.steps;
      sweep.base = spec.base;
      sweep.include_prior_bias = spec.include_prior_bias;
      sweep.threads = spec.threads;
      const std::string family = spec.label_family;
      family_member(family, 0.5);
      sweep.label_family = [family](double beta) { return family_member(family, beta); };
      const auto rows = density::predict_bp_curve(sweep);
      out << "beta,alpha_bp,success_bp,success_labels,success_opt\n";
      for (const auto& row : rows) {
        out << row.value << ',' << row.alpha_bp << ',' << row.success_bp << ','
            << dtv_labels(family_member(family, row.value)) << ',' << row.success_opt << '\n';
      }
      return;
    }
  }
}

}  // namespace sidebp::eval
