#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "sidebp/bp.hpp"
#include "sidebp/density.hpp"
#include "sidebp/error.hpp"
#include "sidebp/eval.hpp"
#include "sidebp/graph_io.hpp"
#include "sidebp/learn.hpp"
#include "sidebp/parallel.hpp"
#include "sidebp/sampling.hpp"

#ifndef SIDEBP_VERSION
#define SIDEBP_VERSION "unknown"
#endif

namespace sidebp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct LabelOpts {
  std::string preset = "none";
  std::string label_model;

  LabelModel resolve() const {
    if (!label_model.empty()) return io::load_label_model(label_model);
    return LabelModel::from_preset(preset);
  }
};

struct Common {
  std::uint64_t seed = 1;
  unsigned threads = default_thread_count();
  std::string out;
};

// Collects results and writes them, plus the manifest, when the command ends.
class Session {
 public:
  Session(std::string command, std::ostream& stdout_stream)
      : command_(std::move(command)), stdout_(stdout_stream), start_(std::chrono::steady_clock::now()) {}

  void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
      stdout_ << text;
      stdout_.flush();
      manifest_.outputs.push_back({"-", sha256_hex(text)});
      return;
    }
    write_file(out_path, text);
    if (manifest_dir_.empty()) {
      manifest_dir_ = fs::absolute(out_path).parent_path();
      manifest_name_ = fs::path(out_path).filename().string() + ".manifest.json";
    }
  }

  void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << text;
    f.close();
    files_.push_back(fs::absolute(path));
  }

  void set_manifest_location(const fs::path& dir, const std::string& name) {
    manifest_dir_ = dir;
    manifest_name_ = name;
  }

  RunManifest& manifest() { return manifest_; }

  /// Records a failed --check assertion; the run still writes its outputs.
  void fail(const std::string& message) { failure_ = message; }
  const std::optional<std::string>& failure() const { return failure_; }

  void finish(const json& parameters, std::optional<std::uint64_t> seed) {
    manifest_.command = command_;
    manifest_.parameters = parameters;
    manifest_.seed = seed;
    manifest_.tool_version = SIDEBP_VERSION;
    manifest_.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (manifest_dir_.empty()) {
      const char* env = std::getenv("SIDEBP_OUTPUT_DIR");
      manifest_dir_ = env && *env ? fs::path(env) : fs::current_path();
      std::string name = command_;
      for (char& c : name) {
        if (c == ' ') c = '-';
      }
      manifest_name_ = "sidebp-" + name + ".manifest.json";
    }
    fs::create_directories(manifest_dir_);
    for (const auto& file : files_) {
      manifest_.outputs.push_back({fs::relative(file, fs::absolute(manifest_dir_)).string(),
                                   sha256_file(file)});
    }
    std::ofstream f(manifest_dir_ / manifest_name_);
    if (!f) throw ValidationError("cannot write manifest in " + manifest_dir_.string());
    f << manifest_.to_json().dump(2) << '\n';
  }

 private:
  std::string command_;
  std::ostream& stdout_;
  std::chrono::steady_clock::time_point start_;
  RunManifest manifest_;
  std::vector<fs::path> files_;
  fs::path manifest_dir_;
  std::string manifest_name_;
  std::optional<std::string> failure_;
};

// Every long option of `app` with its resolved value (given or default).
json resolved_options(const CLI::App& app) {
  json params = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->get_expected_max() == 0) {
      params[name] = opt->count() > 0;
      continue;
    }
    const auto results = opt->results();
    params[name] = results.empty() ? opt->get_default_str() : results.back();
  }
  return params;
}

void add_common(CLI::App* app, Common& c, bool with_seed) {
  if (with_seed) app->add_option("--seed", c.seed, "Base seed for all randomness");
  app->add_option("--threads", c.threads, "Worker threads (default: available cores)")
      ->check(CLI::Range(1u, 4096u));
  app->add_option("--out", c.out, "Output file (default: standard output)");
}

void add_labels(CLI::App* app, LabelOpts& l) {
  app->add_option("--preset", l.preset, "Label model preset: none | noisy:B[,B2] | revealed:B[,B2]");
  app->add_option("--label-model", l.label_model, "Label model JSON file (overrides --preset)");
}

density::DensityParams density_params(double p, double lambda, const LabelModel& labels,
                                      std::uint32_t nodes, double truncation) {
  density::DensityParams dp;
  dp.p = p;
  dp.lambda = lambda;
  dp.labels = labels;
  dp.quadrature.nodes = nodes;
  dp.quadrature.truncation = truncation;
  dp.validate();
  return dp;
}

json success_json(const eval::SuccessEstimate& s) {
  return {{"estimate", s.estimate},   {"standard_error", s.standard_error},
          {"acc_plus", s.acc_plus},   {"acc_minus", s.acc_minus},
          {"n_plus", s.n_plus},       {"n_minus", s.n_minus}};
}

json moments_json(const stats::Moments& m) {
  return {{"count", m.count}, {"mean", m.mean}, {"variance", m.variance},
          {"standard_error", m.standard_error}};
}

json params_json(const SbmParams& p) {
  return {{"p", p.p}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"n", p.n}};
}

json label_model_json(const LabelModel& m) { return json::parse(io::label_model_to_json(m)); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Community detection with vertex labels: BP, density evolution, experiments", "sidebp"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", SIDEBP_VERSION);
  app.set_config("--config", "", "TOML/INI file with option values");

  std::function<void(Session&)> action;
  std::optional<std::uint64_t> used_seed;
  std::string command_name;
  const CLI::App* active = nullptr;
  auto bind = [&](CLI::App* sub, std::string name, bool seeded, Common& common,
                  std::function<void(Session&)> fn) {
    const Common* c = &common;
    sub->callback([&, sub, name, seeded, fn, c] {
      command_name = name;
      active = sub;
      action = fn;
      if (seeded) used_seed = c->seed;
    });
  };

  // generate
  Common gen_common;
  LabelOpts gen_labels;
  ScalingParams gen_scaling{0.5, 0.8, 0.2};
  std::uint64_t gen_n = 1000;
  auto* generate = app.add_subcommand("generate", "Sample a labeled two-community SBM");
  generate->add_option("--n", gen_n, "Vertices")->check(CLI::PositiveNumber);
  generate->add_option("--p", gen_scaling.p, "P(spin = +)");
  generate->add_option("--lambda", gen_scaling.lambda, "Signal strength d(1-b)^2");
  generate->add_option("--eps,--epsilon", gen_scaling.epsilon, "1 - b");
  add_labels(generate, gen_labels);
  add_common(generate, gen_common, true);
  bind(generate, "generate", true, gen_common, [&](Session& s) {
    const auto params = params_from_scaling(gen_scaling, gen_n);
    const auto graph = sample_sbm(params, gen_labels.resolve(), gen_common.seed);
    std::ostringstream text;
    io::write_graph(text, graph);
    s.emit(text.str(), gen_common.out);
    s.manifest().parameters["resolved"] = params_json(params);
  });

  // bp
  Common bp_common;
  LabelOpts bp_labels;
  ScalingParams bp_scaling{0.5, 0.8, 0.2};
  std::string bp_graph;
  std::string bp_label_file;
  bp::BpConfig bp_config;
  bool no_prior_decision = false;
  bool no_prior_init = false;
  auto* bp_cmd = app.add_subcommand("bp", "Run labeled belief propagation on a graph file");
  bp_cmd->add_option("--graph", bp_graph, "Graph file")->required();
  bp_cmd->add_option("--labels", bp_label_file, "Label model JSON file (alias of --label-model)");
  bp_cmd->add_option("--t", bp_config.depth, "Rounds")->check(CLI::PositiveNumber);
  bp_cmd->add_option("--p", bp_scaling.p, "P(spin = +)");
  bp_cmd->add_option("--lambda", bp_scaling.lambda, "Signal strength");
  bp_cmd->add_option("--eps,--epsilon", bp_scaling.epsilon, "1 - b");
  bp_cmd->add_option("--cap", bp_config.llr_cap, "Message clamp");
  bp_cmd->add_flag("--no-prior-in-decision", no_prior_decision, "Threshold R - w instead of R");
  bp_cmd->add_flag("--no-prior-in-init", no_prior_init, "Start messages at h(L) instead of h(L) + w");
  add_labels(bp_cmd, bp_labels);
  add_common(bp_cmd, bp_common, false);
  bind(bp_cmd, "bp", false, bp_common, [&](Session& s) {
    if (!bp_label_file.empty()) bp_labels.label_model = bp_label_file;
    const auto graph = io::load_graph(bp_graph);
    const auto labels = bp_labels.resolve();
    if (labels.size() != graph.num_labels()) {
      throw ValidationError("label model size does not match the graph's label count");
    }
    const auto params = params_from_scaling(bp_scaling, graph.num_vertices());
    bp_config.include_prior_bias_in_decision = !no_prior_decision;
    bp_config.init_with_prior_bias = !no_prior_init;
    const auto result = bp::run_bp(graph, params, labels, bp_config);
    json j;
    j["rounds"] = result.state.round;
    j["estimates"] = result.estimates;
    j["beliefs"] = result.state.beliefs;
    j["clamp_events"] = result.state.clamp_events;
    j["success"] = graph.has_spins() ? success_json(eval::empirical_success(result.estimates, graph.spins()))
                                     : json(nullptr);
    s.emit(dump(j), bp_common.out);
    s.manifest().parameters["resolved"] = params_json(params);
  });

  // density
  auto* density_cmd = app.add_subcommand("density", "Large-degree theory");
  density_cmd->require_subcommand(1);
  struct DensityOpts {
    Common common;
    LabelOpts labels;
    double p = 0.5;
    double lambda = 0.8;
    std::uint32_t nodes = 201;
    double truncation = 8.0;
    density::DensityParams params() const {
      return density_params(p, lambda, labels.resolve(), nodes, truncation);
    }
  };
  auto add_density = [&](CLI::App* sub, DensityOpts& o) {
    sub->add_option("--p", o.p, "P(spin = +)");
    sub->add_option("--lambda", o.lambda, "Signal strength");
    sub->add_option("--nodes", o.nodes, "Quadrature nodes");
    sub->add_option("--truncation", o.truncation, "Quadrature half-width in standard deviations");
    add_labels(sub, o.labels);
    add_common(sub, o.common, false);
  };

  DensityOpts g_opts;
  double g_alpha = 0.0;
  auto* g_cmd = density_cmd->add_subcommand("g", "Evaluate G(alpha)");
  g_cmd->add_option("--alpha", g_alpha, "Argument")->required();
  add_density(g_cmd, g_opts);
  bind(g_cmd, "density g", false, g_opts.common, [&](Session& s) {
    s.emit(format_number(density::big_g(g_alpha, g_opts.params())) + "\n", g_opts.common.out);
  });

  DensityOpts ev_opts;
  std::string ev_from = "zero";
  std::optional<double> ev_alpha0;
  density::EvolveOptions ev_options;
  auto* ev_cmd = density_cmd->add_subcommand("evolve", "Iterate alpha <- G(alpha)");
  ev_cmd->add_option("--from", ev_from, "Start: zero or opt (lambda/(p(1-p)))")
      ->check(CLI::IsMember({"zero", "opt"}));
  ev_cmd->add_option("--alpha0", ev_alpha0, "Explicit start (overrides --from)");
  ev_cmd->add_option("--max-steps", ev_options.max_steps, "Step limit");
  ev_cmd->add_option("--tol", ev_options.tolerance, "Stop when |alpha_t - alpha_{t-1}| <= tol");
  add_density(ev_cmd, ev_opts);
  bind(ev_cmd, "density evolve", false, ev_opts.common, [&](Session& s) {
    const auto dp = ev_opts.params();
    const double start = ev_alpha0 ? *ev_alpha0
                         : ev_from == "opt" ? density::tilde_alpha1(dp.lambda, dp.p)
                                            : 0.0;
    const auto trace = density::evolve(start, dp, ev_options);
    json j = {{"alpha0", start},
              {"alpha", trace.alpha},
              {"converged", trace.converged},
              {"limit", trace.limit},
              {"steps", trace.alpha.size() - 1}};
    s.emit(dump(j), ev_opts.common.out);
  });

  DensityOpts fp_opts;
  density::FixedPointOptions fp_options;
  auto* fp_cmd = density_cmd->add_subcommand("fixed-points", "Locate and classify fixed points of G");
  fp_cmd->add_option("--alpha-max", fp_options.alpha_max, "Search limit (default 2 lambda/(p(1-p)))");
  fp_cmd->add_option("--grid-step", fp_options.grid_step, "Scan step (default 1e-3 alpha_max)");
  fp_cmd->add_option("--bisection-tol", fp_options.bisection_tolerance, "Bisection tolerance");
  fp_cmd->add_option("--margin", fp_options.stability_margin, "Band around |G'| = 1 called marginal");
  add_density(fp_cmd, fp_opts);
  bind(fp_cmd, "density fixed-points", false, fp_opts.common, [&](Session& s) {
    const auto dp = fp_opts.params();
    const auto report = density::find_fixed_points(dp, fp_options);
    json points = json::array();
    for (const auto& fp : report.points) {
      points.push_back({{"alpha", fp.alpha},
                        {"stability", density::to_string(fp.stability)},
                        {"derivative", fp.derivative},
                        {"residual", fp.residual}});
    }
    json j = {{"p", dp.p},
              {"lambda", dp.lambda},
              {"labels", label_model_json(dp.labels)},
              {"alpha1", density::alpha1_closed_form(dp)},
              {"tilde_alpha1", density::tilde_alpha1(dp.lambda, dp.p)},
              {"alpha_max", report.alpha_max},
              {"grid_step", report.grid_step},
              {"bisection_tolerance", report.bisection_tolerance},
              {"points", points}};
    s.emit(dump(j), fp_opts.common.out);
  });

  DensityOpts sw_opts;
  std::string sw_var = "p";
  std::string sw_family = "noisy";
  double sw_from = 0.05;
  double sw_to = 0.95;
  std::uint32_t sw_steps = 19;
  bool sw_no_prior = false;
  auto* sw_cmd = density_cmd->add_subcommand("sweep", "Predicted BP performance over a grid");
  sw_cmd->add_option("--var", sw_var, "Swept variable")->check(CLI::IsMember({"p", "lambda", "beta"}));
  sw_cmd->add_option("--from", sw_from, "First grid value");
  sw_cmd->add_option("--to", sw_to, "Last grid value");
  sw_cmd->add_option("--steps", sw_steps, "Grid points")->check(CLI::PositiveNumber);
  sw_cmd->add_option("--label-family", sw_family, "Label family for beta sweeps")
      ->check(CLI::IsMember({"noisy", "revealed"}));
  sw_cmd->add_flag("--no-prior-bias", sw_no_prior, "Drop w from the success formula");
  add_density(sw_cmd, sw_opts);
  bind(sw_cmd, "density sweep", false, sw_opts.common, [&](Session& s) {
    density::SweepSpec spec;
    spec.variable = density::parse_sweep_variable(sw_var);
    spec.from = sw_from;
    spec.to = sw_to;
    spec.steps = sw_steps;
    spec.base.p = sw_opts.p;
    spec.base.lambda = sw_opts.lambda;
    spec.base.labels = sw_opts.labels.resolve();
    spec.base.quadrature = {sw_opts.nodes, sw_opts.truncation};
    spec.include_prior_bias = !sw_no_prior;
    spec.threads = sw_opts.common.threads;
    if (spec.variable == density::SweepVariable::kBeta) {
      const std::string family = sw_family;
      spec.label_family = [family](double beta) {
        return family == "noisy" ? LabelModel::noisy(beta) : LabelModel::revealed(beta);
      };
    }
    std::ostringstream csv;
    density::write_sweep_csv(csv, spec.variable, density::predict_bp_curve(spec));
    s.emit(csv.str(), sw_opts.common.out);
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Monte Carlo experiments and figure data");
  eval_cmd->require_subcommand(1);

  Common tm_common;
  LabelOpts tm_labels;
  eval::TreeMomentSpec tm_spec;
  tm_spec.scaling.epsilon = 0.1;
  tm_spec.trials = 10000;
  bool tm_check = false;
  auto* tm_cmd = eval_cmd->add_subcommand("tree-moments", "Root statistic moments on Galton-Watson trees");
  tm_cmd->add_option("--p", tm_spec.scaling.p, "P(spin = +)");
  tm_cmd->add_option("--lambda", tm_spec.scaling.lambda, "Signal strength");
  tm_cmd->add_option("--eps,--epsilon", tm_spec.scaling.epsilon, "1 - b; d = lambda/eps^2");
  tm_cmd->add_option("--depth", tm_spec.depth, "Recursion depth r")->check(CLI::PositiveNumber);
  tm_cmd->add_option("--trials", tm_spec.trials, "Trees per root spin")->check(CLI::PositiveNumber);
  tm_cmd->add_flag("--check", tm_check, "Exit 3 unless |z| <= 3 and variance within 5% on both sides");
  add_labels(tm_cmd, tm_labels);
  add_common(tm_cmd, tm_common, true);
  bind(tm_cmd, "eval tree-moments", true, tm_common, [&](Session& s) {
    tm_spec.labels = tm_labels.resolve();
    tm_spec.seed = tm_common.seed;
    tm_spec.threads = tm_common.threads;
    const auto r = eval::tree_moment_check(tm_spec);
    auto side = [](const eval::TreeSideReport& t) {
      return json{{"gamma", moments_json(t.gamma)},
                  {"theory_mean", t.theory_mean},
                  {"z_mean", t.z_mean},
                  {"variance_relative_error", t.variance_relative_error},
                  {"sign_accuracy", t.sign_accuracy}};
    };
    json j = {{"depth", r.depth},         {"trials", r.trials},
              {"seed", r.seed},           {"d", r.d},
              {"alpha", r.alpha},         {"plus", side(r.plus)},
              {"minus", side(r.minus)},   {"sign_rule", success_json(r.sign_rule)},
              {"predicted_success", r.predicted_success}};
    s.emit(dump(j), tm_common.out);
    if (tm_check) {
      for (const auto* t : {&r.plus, &r.minus}) {
        if (std::abs(t->z_mean) > 3.0 || t->variance_relative_error > 0.05) {
          s.fail("tree moments disagree with density evolution");
          break;
        }
      }
    }
  });

  Common ee_common;
  LabelOpts ee_labels;
  eval::EndToEndSpec ee_spec;
  ee_spec.n = 10000;
  ee_spec.graphs = 3;
  ee_spec.bp.depth = 5;
  bool ee_no_prior = false;
  bool ee_check = false;
  double ee_tolerance = 0.05;
  auto* ee_cmd = eval_cmd->add_subcommand("end-to-end", "BP and label-only baseline on sampled SBMs");
  ee_cmd->add_option("--p", ee_spec.scaling.p, "P(spin = +)");
  ee_cmd->add_option("--lambda", ee_spec.scaling.lambda, "Signal strength");
  ee_cmd->add_option("--eps,--epsilon", ee_spec.scaling.epsilon, "1 - b");
  ee_cmd->add_option("--n", ee_spec.n, "Vertices")->check(CLI::PositiveNumber);
  ee_cmd->add_option("--t", ee_spec.bp.depth, "BP rounds")->check(CLI::PositiveNumber);
  ee_cmd->add_option("--graphs", ee_spec.graphs, "Independent graphs")->check(CLI::PositiveNumber);
  ee_cmd->add_flag("--no-prior-in-decision", ee_no_prior, "Threshold R - w instead of R");
  ee_cmd->add_option("--tolerance", ee_tolerance, "Allowed |BP - predicted| for --check");
  ee_cmd->add_flag("--check", ee_check,
                   "Exit 3 unless BP >= baseline - 2 SE and |BP - predicted| <= tolerance");
  add_labels(ee_cmd, ee_labels);
  add_common(ee_cmd, ee_common, true);
  bind(ee_cmd, "eval end-to-end", true, ee_common, [&](Session& s) {
    ee_spec.labels = ee_labels.resolve();
    ee_spec.seed = ee_common.seed;
    ee_spec.threads = ee_common.threads;
    ee_spec.bp.include_prior_bias_in_decision = !ee_no_prior;
    const auto r = eval::sbm_end_to_end(ee_spec);
    json trials = json::array();
    for (const auto& t : r.trials) {
      trials.push_back({{"seed", t.seed}, {"bp", success_json(t.bp)}, {"baseline", success_json(t.baseline)}});
    }
    json j = {{"trials", trials},
              {"bp_success", moments_json(r.bp_success)},
              {"baseline_success", moments_json(r.baseline_success)},
              {"alpha_t", r.alpha_t},
              {"predicted_success", r.predicted_success},
              {"dtv", r.dtv}};
    s.emit(dump(j), ee_common.out);
    if (ee_check) {
      const double se = std::hypot(r.bp_success.standard_error, r.baseline_success.standard_error);
      if (r.bp_success.mean < r.baseline_success.mean - 2.0 * se ||
          std::abs(r.bp_success.mean - r.predicted_success) > ee_tolerance) {
        s.fail("end-to-end success outside the asserted range");
      }
    }
  });

  Common ex_common;
  eval::Example1Spec ex_spec;
  std::string ex_detector = "spectral";
  bool ex_check = false;
  auto* ex_cmd = eval_cmd->add_subcommand("example1", "Label-splitting experiment on the four-block graph");
  ex_cmd->add_option("--a", ex_spec.a, "Within-community affinity");
  ex_cmd->add_option("--b", ex_spec.b, "Between-community affinity");
  ex_cmd->add_option("--n", ex_spec.n, "Vertices (multiple of 4)");
  ex_cmd->add_option("--graphs", ex_spec.graphs, "Independent graphs")->check(CLI::PositiveNumber);
  ex_cmd->add_option("--detector", ex_detector, "spectral or seeded-bp")
      ->check(CLI::IsMember({"spectral", "seeded-bp"}));
  ex_cmd->add_option("--iterations", ex_spec.spectral_iterations, "Power iterations");
  ex_cmd->add_option("--rounds", ex_spec.bp_rounds, "BP rounds for seeded-bp");
  ex_cmd->add_option("--flip-rate", ex_spec.seed_flip_rate, "Seed partition noise for seeded-bp");
  ex_cmd->add_flag("--check", ex_check, "Exit 3 unless mean overlap >= 0.1 and control <= 0.05");
  add_common(ex_cmd, ex_common, true);
  bind(ex_cmd, "eval example1", true, ex_common, [&](Session& s) {
    ex_spec.seed = ex_common.seed;
    ex_spec.threads = ex_common.threads;
    ex_spec.detector =
        ex_detector == "spectral" ? eval::Example1Detector::kSpectral : eval::Example1Detector::kSeededBp;
    const auto r = eval::example1_experiment(ex_spec);
    json trials = json::array();
    for (const auto& t : r.trials) {
      trials.push_back({{"seed", t.seed}, {"overlap", t.overlap}, {"control", t.control}});
    }
    json j = {{"thresholds", {{"lower", r.lower}, {"middle", r.middle}, {"upper", r.upper}}},
              {"trials", trials},
              {"overlap", moments_json(r.overlap)},
              {"control", moments_json(r.control)}};
    s.emit(dump(j), ex_common.out);
    if (ex_check && (r.overlap.mean < 0.1 || r.control.mean > 0.05)) {
      s.fail("within-group overlap not above the control");
    }
  });

  Common fig_common;
  LabelOpts fig_labels;
  eval::FigureSpec fig_spec;
  std::string fig_kind = "G_curve";
  bool fig_no_prior = false;
  std::uint32_t fig_nodes = 201;
  double fig_truncation = 8.0;
  double fig_p = 0.5;
  double fig_lambda = 0.8;
  auto* fig_cmd = eval_cmd->add_subcommand("figure", "Figure data from density evolution (CSV)");
  fig_cmd->add_option("--kind", fig_kind, "G_curve | succ_vs_p | succ_vs_lambda | bp_vs_labels")
      ->check(CLI::IsMember({"G_curve", "succ_vs_p", "succ_vs_lambda", "bp_vs_labels"}));
  fig_cmd->add_option("--p", fig_p, "P(spin = +)");
  fig_cmd->add_option("--lambda", fig_lambda, "Signal strength");
  fig_cmd->add_option("--from", fig_spec.from, "First abscissa");
  fig_cmd->add_option("--to", fig_spec.to, "Last abscissa");
  fig_cmd->add_option("--steps", fig_spec.steps, "Rows")->check(CLI::PositiveNumber);
  fig_cmd->add_option("--label-family", fig_spec.label_family, "noisy or revealed (bp_vs_labels)")
      ->check(CLI::IsMember({"noisy", "revealed"}));
  fig_cmd->add_flag("--no-prior-bias", fig_no_prior, "Drop w from the success formula");
  fig_cmd->add_option("--nodes", fig_nodes, "Quadrature nodes");
  fig_cmd->add_option("--truncation", fig_truncation, "Quadrature half-width");
  add_labels(fig_cmd, fig_labels);
  add_common(fig_cmd, fig_common, false);
  bind(fig_cmd, "eval figure", false, fig_common, [&](Session& s) {
    fig_spec.base = density_params(fig_p, fig_lambda, fig_labels.resolve(), fig_nodes, fig_truncation);
    fig_spec.include_prior_bias = !fig_no_prior;
    fig_spec.threads = fig_common.threads;
    std::ostringstream csv;
    eval::figure_sweep(eval::parse_figure_kind(fig_kind), fig_spec, csv);
    s.emit(csv.str(), fig_common.out);
  });

  // learn
  auto* learn_cmd = app.add_subcommand("learn", "Parameter estimation and label splitting");
  learn_cmd->require_subcommand(1);

  Common le_common;
  std::string le_graph;
  std::string le_spins;
  auto* le_cmd = learn_cmd->add_subcommand("estimate", "Estimate label distributions and affinities");
  le_cmd->add_option("--graph", le_graph, "Graph file")->required();
  le_cmd->add_option("--spins", le_spins, "Spin estimates, one +1/-1 per line (default: spins in the graph file)");
  add_common(le_cmd, le_common, false);
  bind(le_cmd, "learn estimate", false, le_common, [&](Session& s) {
    const auto graph = io::load_graph(le_graph);
    std::vector<Spin> spins;
    if (!le_spins.empty()) {
      spins = io::load_spins(le_spins);
    } else if (graph.has_spins()) {
      spins = graph.spins();
    } else {
      throw ValidationError("graph file has no spins; pass --spins");
    }
    const auto est = learn::estimate_label_dists(graph, spins);
    json j = {{"mu_hat", est.mu_hat}, {"nu_hat", est.nu_hat}, {"p_hat", est.p_hat},
              {"a_hat", est.a_hat},   {"b_hat", est.b_hat},   {"c_hat", est.c_hat},
              {"d_hat", est.d_hat},   {"n_plus", est.n_plus}, {"n_minus", est.n_minus}};
    s.emit(dump(j), le_common.out);
  });

  Common ls_common;
  std::string ls_graph;
  std::string ls_prefix = "split";
  auto* ls_cmd = learn_cmd->add_subcommand("split", "Write one induced subgraph per label");
  ls_cmd->add_option("--graph", ls_graph, "Graph file")->required();
  ls_cmd->add_option("--out-prefix", ls_prefix, "Files are written as PREFIX.labelK.graph");
  add_common(ls_cmd, ls_common, false);
  bind(ls_cmd, "learn split", false, ls_common, [&](Session& s) {
    const auto graph = io::load_graph(ls_graph);
    const auto blocks = learn::kernel_split(graph);
    json files = json::array();
    for (const auto& block : blocks) {
      const std::string path = ls_prefix + ".label" + std::to_string(block.label) + ".graph";
      std::ostringstream text;
      io::write_graph(text, block.graph);
      s.write_file(path, text.str());
      files.push_back({{"label", block.label},
                       {"path", path},
                       {"vertices", block.vertices.size()},
                       {"edges", block.graph.num_edges()}});
    }
    const fs::path prefix_dir = fs::absolute(fs::path(ls_prefix)).parent_path();
    if (ls_common.out.empty()) {
      s.set_manifest_location(prefix_dir, fs::path(ls_prefix).filename().string() + ".manifest.json");
    }
    s.emit(dump(json{{"blocks", files}}), ls_common.out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << SIDEBP_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* scope = &app;
    for (const auto* sub : app.get_subcommands()) {
      scope = sub;
      while (!scope->get_subcommands().empty()) scope = scope->get_subcommands().front();
    }
    err << scope->help();
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  if (!action || !active) {
    err << app.help();
    return kExitValidation;
  }
  try {
    Session session(command_name, out);
    json params = resolved_options(*active);
    action(session);
    if (session.manifest().parameters.contains("resolved")) {
      params["resolved"] = session.manifest().parameters["resolved"];
    }
    session.finish(params, used_seed);
    if (session.failure()) {
      err << "check failed: " << *session.failure() << '\n';
      return kExitCheckFailed;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace sidebp::cli
