#pragma once

#include <cstdint>
#include <vector>

#include "sidebp/bp.hpp"
#include "sidebp/graph.hpp"
#include "sidebp/label_model.hpp"
#include "sidebp/random.hpp"
#include "sidebp/sbm_params.hpp"

namespace sidebp {

/// Root statistic of the depth-r tree recursion, sampled without
/// materializing the tree. Children are generated per (spin, label) by
/// Poisson thinning (N_{s',l} ~ Poisson(d K(s, s') P(l | s')) independently),
/// and at depth r-1 the children collapse further to per-label counts, so
/// the work per sample is about d^{r-1} * labels Poisson draws instead of
/// d^r nodes.
///
/// The law of the result is that of bp::tree_recursion on sample_gw_tree
/// with the same root spin; the two differ only in floating-point summation
/// order.
class TreeStatisticSampler {
 public:
  TreeStatisticSampler(const SbmParams& params, const LabelModel& labels, std::uint32_t depth,
                       double llr_cap = 30.0);

  struct Sample {
    double xi = 0.0;     ///< xi_r at the root
    double field = 0.0;  ///< h(L_root) + w
  };

  Sample operator()(Spin root, Rng& rng) const;

  std::uint32_t depth() const noexcept { return depth_; }
  const bp::ChannelFunctions& channel() const noexcept { return channel_; }

 private:
  double node(int spin_index, std::size_t label, std::uint32_t remaining, Rng& rng) const;
  /// f(clamp(xi)) of a node with `remaining` levels below it.
  double message(int spin_index, std::size_t label, std::uint32_t remaining, Rng& rng) const;
  /// Sum of messages from the children of a node with the given spin.
  double children_sum(int spin_index, std::uint32_t remaining, Rng& rng) const;
  double leaf_parent_value(std::size_t label, const std::uint64_t* counts) const;
  std::size_t draw_label(int spin_index, Rng& rng) const;

  std::uint32_t depth_;
  bp::ChannelFunctions channel_;
  std::vector<double> label_probs_[2];  // [0] = +, [1] = -
  std::vector<PoissonTable> children_[2][2];  // [parent][child][child label]
  std::vector<PoissonTable> leaf_counts_[2];  // [parent][label]
  std::vector<double> leaf_transfer_;         // f(clamp(h_l + w))
  // Messages from depth-1 nodes are a function of (label, per-label child
  // counts); when that domain is small enough they are tabulated up front.
  std::vector<std::uint64_t> count_lo_;
  std::vector<std::uint64_t> count_width_;
  std::vector<double> message_table_;
};

}  // namespace sidebp
