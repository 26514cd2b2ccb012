#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sidebp/graph.hpp"
#include "sidebp/label_model.hpp"
#include "sidebp/random.hpp"
#include "sidebp/sbm_params.hpp"

namespace sidebp {

/// Random graph on consecutive vertex blocks: block k holds `block_sizes[k]`
/// vertices and a pair in blocks (k, l) is joined independently with
/// probability `probs[k][l]` (symmetric). Runs in O(n + m): per block pair
/// the edge count is Binomial and endpoints are a uniform subset of the
/// block's pair space (Floyd's algorithm). Returned edges are sorted.
std::vector<Edge> sample_block_edges(std::span<const std::uint32_t> block_sizes,
                                     const std::vector<std::vector<double>>& probs, Rng& rng);

/// Labeled two-community SBM. Spins are i.i.d. with P(+) = p; labels are
/// drawn from mu or nu by spin. Deterministic given `seed`.
LabeledGraph sample_sbm(const SbmParams& params, const LabelModel& labels, std::uint64_t seed);

enum class RootSpinMode { kPrior, kPlus, kMinus };

/// Labeled Galton-Watson tree, nodes in breadth-first order (node 0 is the
/// root, parents precede children, children of a node are contiguous).
struct GwTree {
  static constexpr std::uint32_t kNoParent = static_cast<std::uint32_t>(-1);

  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> depth;
  std::vector<Spin> spin;
  std::vector<LabelId> label;
  std::uint32_t root = 0;
  std::uint32_t max_depth = 0;

  std::size_t size() const noexcept { return parent.size(); }
  /// Children ranges, derived from the breadth-first layout.
  std::vector<std::vector<std::uint32_t>> children() const;
  /// The tree as a LabeledGraph with identical vertex numbering.
  LabeledGraph to_graph(std::uint32_t num_labels) const;
};

struct GwTreeOptions {
  std::uint32_t depth = 0;
  RootSpinMode root_spin = RootSpinMode::kPrior;
  /// Refuse when the expected node count sum_k d^k exceeds this.
  double node_cap = 1e8;
};

/// Poisson(d) offspring; child spin kernel from SbmParams::child_plus_probability;
/// labels from mu/nu by spin. Throws ValidationError when the expected size
/// exceeds the cap.
GwTree sample_gw_tree(const SbmParams& params, const LabelModel& labels,
                      const GwTreeOptions& options, std::uint64_t seed);

}  // namespace sidebp
