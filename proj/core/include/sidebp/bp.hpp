#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sidebp/graph.hpp"
#include "sidebp/label_model.hpp"
#include "sidebp/sampling.hpp"
#include "sidebp/sbm_params.hpp"

namespace sidebp::bp {

/// Edge transfer f(x) = log((a e^x + b) / (b e^x + c)), evaluated without
/// overflow for any finite x. Equals log(a/b) (resp. log(b/c)) to machine
/// precision once |x| exceeds ~40, and exactly beyond ~745.
double edge_transfer(double x, double a, double b, double c) noexcept;

struct BpConfig {
  /// Number of rounds t >= 1; beliefs use the radius-t neighborhood.
  std::uint32_t depth = 1;
  /// Messages and label fields are clamped to [-llr_cap, llr_cap].
  double llr_cap = 30.0;
  /// Threshold R_i^t (true) or R_i^t - w (false) at zero.
  bool include_prior_bias_in_decision = true;
  /// Initial messages h(L_i) + w (true) or h(L_i) (false). The former makes
  /// run_bp coincide with tree_recursion on trees for every p.
  bool init_with_prior_bias = true;

  void validate() const;
};

/// The scalar ingredients of the recursion for one (params, label model).
struct ChannelFunctions {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double w = 0.0;            ///< log(p/(1-p))
  std::vector<double> h;     ///< log(mu/nu) per label, clamped to +-llr_cap
  double llr_cap = 30.0;

  static ChannelFunctions make(const SbmParams& params, const LabelModel& labels,
                               double llr_cap = 30.0);

  double transfer(double x) const noexcept;
  double clamp(double x) const noexcept { return x > llr_cap ? llr_cap : (x < -llr_cap ? -llr_cap : x); }
};

/// Directed-edge messages and vertex beliefs after the last round.
struct MessageState {
  std::vector<double> messages;  ///< messages[s] = R_{i -> slot_target(s)} for slot s in row i
  std::vector<double> beliefs;   ///< R_i^t
  std::uint32_t round = 0;
  std::uint64_t clamp_events = 0;  ///< message updates that hit +-llr_cap
};

struct BpResult {
  std::vector<Spin> estimates;
  MessageState state;
};

/// Local linearized belief propagation with vertex labels.
///
/// Messages start at h(L_i) (+ w, see BpConfig::init_with_prior_bias); for
/// k = 1..t-1 every directed edge is updated synchronously as
///   R_{i->j} = h(L_i) + w + sum_{v in N(i) \ j} f(R_{v->i}),
/// and the belief is R_i = h(L_i) + w + sum_{v in N(i)} f(R_{v->i}).
/// Vertex i is estimated + iff its decision statistic is >= 0.
///
/// Neighbor sums are accumulated left to right in CSR order, so on trees the
/// result equals tree_recursion() bit for bit (for degrees up to
/// kExactSumDegree; larger rows use prefix/suffix sums).
BpResult run_bp(const LabeledGraph& graph, const SbmParams& params, const LabelModel& labels,
                const BpConfig& config);

/// Same recursion with an explicit per-vertex field in place of h(L_i).
/// Fields are clamped to +-llr_cap.
BpResult run_bp_with_fields(const LabeledGraph& graph, const ChannelFunctions& channel,
                            std::span<const double> field, const BpConfig& config);

inline constexpr std::uint32_t kExactSumDegree = 64;

/// xi_r at the root of a labeled tree:
///   xi_r(v) = h(L_v) + w + sum_{children j} f(xi_{r-1}(j)),  xi_0 = h(L) + w,
/// where nodes at relative depth r act as leaves. Child values are clamped
/// to +-llr_cap before f, as BP clamps messages. Throws if r exceeds the
/// tree's depth.
double tree_recursion(const GwTree& tree, const SbmParams& params, const LabelModel& labels,
                      std::uint32_t r, double llr_cap = 30.0);

}  // namespace sidebp::bp
