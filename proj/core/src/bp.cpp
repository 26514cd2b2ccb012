#include "sidebp/bp.hpp"

#include <cmath>

#include "sidebp/error.hpp"

namespace sidebp::bp {

double edge_transfer(double x, double a, double b, double c) noexcept {
  double num = 0.0;
  double den = 0.0;
  if (x > 0.0) {
    const double t = std::exp(-x);
    num = a + b * t;
    den = b + c * t;
  } else {
    const double t = std::exp(x);
    num = a * t + b;
    den = b * t + c;
  }
  return std::log(num) - std::log(den);
}

void BpConfig::validate() const {
  if (depth < 1) throw ValidationError("BP depth t must be >= 1");
  if (!(llr_cap > 0.0) || !std::isfinite(llr_cap)) throw ValidationError("llr_cap must be positive");
}

ChannelFunctions ChannelFunctions::make(const SbmParams& params, const LabelModel& labels,
                                        double llr_cap) {
  params.validate();
  ChannelFunctions ch;
  ch.a = params.a;
  ch.b = params.b;
  ch.c = params.c;
  ch.w = std::log(params.p) - std::log1p(-params.p);
  ch.llr_cap = llr_cap;
  ch.h.resize(labels.size());
  for (std::size_t l = 0; l < labels.size(); ++l) ch.h[l] = ch.clamp(labels.log_ratio(l));
  return ch;
}

double ChannelFunctions::transfer(double x) const noexcept {
  const double y = edge_transfer(x, a, b, c);
  // b = 0 or c = 0 makes the asymptotes infinite.
  if (std::isnan(y)) return 0.0;
  return clamp(y);
}

namespace {

// Left-to-right sum base + F[begin..end) skipping index `skip`.
double sum_skipping(double base, const double* incoming, std::size_t count, std::size_t skip) {
  double s = base;
  for (std::size_t k = 0; k < count; ++k) {
    if (k != skip) s += incoming[k];
  }
  return s;
}

}  // namespace

BpResult run_bp_with_fields(const LabeledGraph& graph, const ChannelFunctions& channel,
                            std::span<const double> field, const BpConfig& config) {
  config.validate();
  const std::uint32_t n = graph.num_vertices();
  if (field.size() != n) throw ValidationError("field vector length differs from n");

  std::vector<double> base(n);
  for (std::uint32_t i = 0; i < n; ++i) base[i] = channel.clamp(field[i]) + channel.w;

  MessageState state;
  state.messages.resize(graph.num_slots());
  for (std::uint32_t i = 0; i < n; ++i) {
    const double init = config.init_with_prior_bias ? base[i] : channel.clamp(field[i]);
    for (auto s = graph.row_begin(i); s < graph.row_end(i); ++s) {
      state.messages[s] = channel.clamp(init);
    }
  }

  // incoming[s] = f(R_{slot_target(s) -> i}) for slot s in row i
  std::vector<double> incoming(graph.num_slots());
  std::vector<double> next(graph.num_slots());
  std::vector<double> prefix;
  std::vector<double> suffix;
  auto refresh_incoming = [&] {
    for (std::uint64_t s = 0; s < graph.num_slots(); ++s) {
      incoming[s] = channel.transfer(state.messages[graph.reverse_slot(s)]);
    }
  };

  for (std::uint32_t k = 1; k < config.depth; ++k) {
    refresh_incoming();
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto begin = graph.row_begin(i);
      const std::size_t deg = graph.degree(i);
      const double* in = incoming.data() + begin;
      if (deg <= kExactSumDegree) {
        for (std::size_t pos = 0; pos < deg; ++pos) next[begin + pos] = sum_skipping(base[i], in, deg, pos);
      } else {
        prefix.assign(deg + 1, 0.0);
        suffix.assign(deg + 1, 0.0);
        prefix[0] = base[i];
        for (std::size_t pos = 0; pos < deg; ++pos) prefix[pos + 1] = prefix[pos] + in[pos];
        for (std::size_t pos = deg; pos-- > 0;) suffix[pos] = in[pos] + suffix[pos + 1];
        for (std::size_t pos = 0; pos < deg; ++pos) next[begin + pos] = prefix[pos] + suffix[pos + 1];
      }
    }
    for (std::uint64_t s = 0; s < graph.num_slots(); ++s) {
      const double clamped = channel.clamp(next[s]);
      if (clamped != next[s]) ++state.clamp_events;
      state.messages[s] = clamped;
    }
    state.round = k;
  }

  refresh_incoming();
  state.beliefs.resize(n);
  BpResult result;
  result.estimates.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto begin = graph.row_begin(i);
    const double belief =
        sum_skipping(base[i], incoming.data() + begin, graph.degree(i), graph.degree(i));
    state.beliefs[i] = belief;
    const double statistic = config.include_prior_bias_in_decision ? belief : belief - channel.w;
    result.estimates[i] = statistic >= 0.0 ? kPlus : kMinus;
  }
  state.round = config.depth;
  result.state = std::move(state);
  return result;
}

BpResult run_bp(const LabeledGraph& graph, const SbmParams& params, const LabelModel& labels,
                const BpConfig& config) {
  if (graph.num_labels() > labels.size()) {
    throw ValidationError("graph uses more labels than the label model defines");
  }
  const auto channel = ChannelFunctions::make(params, labels, config.llr_cap);
  std::vector<double> field(graph.num_vertices());
  for (std::uint32_t i = 0; i < graph.num_vertices(); ++i) field[i] = channel.h[graph.label(i)];
  return run_bp_with_fields(graph, channel, field, config);
}

double tree_recursion(const GwTree& tree, const SbmParams& params, const LabelModel& labels,
                      std::uint32_t r, double llr_cap) {
  if (tree.size() == 0) throw ValidationError("empty tree");
  if (r > tree.max_depth) throw ValidationError("recursion depth exceeds tree depth");
  const auto channel = ChannelFunctions::make(params, labels, llr_cap);

  // Breadth-first layout: children have larger indices than their parent,
  // so a reverse sweep sees every child before its parent. Children are
  // folded in ascending order, matching BP's CSR neighbor order.
  const auto kids = tree.children();
  std::vector<double> value(tree.size(), 0.0);
  for (std::size_t v = tree.size(); v-- > 0;) {
    if (tree.depth[v] > r) continue;
    double s = channel.h[tree.label[v]] + channel.w;
    if (tree.depth[v] < r) {
      for (auto child : kids[v]) s += channel.transfer(value[child]);
    }
    value[v] = v == tree.root ? s : channel.clamp(s);
  }
  return value[tree.root];
}

}  // namespace sidebp::bp
