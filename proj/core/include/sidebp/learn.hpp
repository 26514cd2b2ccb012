#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sidebp/graph.hpp"
#include "sidebp/label_model.hpp"
#include "sidebp/sbm_params.hpp"

namespace sidebp::learn {

struct EstimatedModel {
  std::vector<double> mu_hat;
  std::vector<double> nu_hat;
  double p_hat = 0.0;
  double a_hat = 0.0;
  double b_hat = 0.0;
  double c_hat = 0.0;
  double d_hat = 0.0;  ///< 2m / n
  std::uint32_t n_plus = 0;
  std::uint32_t n_minus = 0;
};

/// Plug-in estimates from spin estimates: label frequencies per estimated
/// class, p_hat = n_+/n, and block edge densities rescaled by n/d_hat.
/// Throws ValidationError if either class is empty or lengths differ.
EstimatedModel estimate_label_dists(const LabeledGraph& graph, std::span<const Spin> spins);

struct LabelBlock {
  LabelId label = 0;
  std::vector<VertexId> vertices;  ///< original ids, ascending
  LabeledGraph graph;              ///< induced subgraph, vertex k = vertices[k]
};

/// Drops every edge whose endpoints carry different labels and returns one
/// block per label that occurs in the graph, in label order.
std::vector<LabelBlock> kernel_split(const LabeledGraph& graph);

/// Mean degrees of + and - vertices with label l differ, i.e.
/// |p mu(l) a - (p mu(l) b + p nu(l) (a - b))| > 1e-12.
bool degree_separation_check(const SbmParams& params, const LabelModel& labels, LabelId label);

struct SpectralResult {
  std::vector<Spin> spins;
  bool converged = false;
  std::uint32_t iterations = 0;
  double eigenvalue = 0.0;  ///< Rayleigh quotient of the final iterate
};

/// Power iteration on B = A - (d_hat/n) 11^T restricted to the largest
/// connected component, kept orthogonal to the all-ones vector; spins are
/// the signs of the final vector. Vertices outside the component get +.
/// Once the iteration has converged the output depends on the graph only
/// through the leading eigenvector, so relabeling the vertices permutes it
/// (up to a global flip).
/// Converged means the iterate moved by less than `tolerance` (L2, up to
/// sign) in the last step.
SpectralResult spectral_partition(const LabeledGraph& graph, std::uint32_t iterations,
                                  std::uint64_t seed, double tolerance = 1e-8);

/// Assembles one global spin vector from per-block partitions. Each block's
/// orientation is chosen (blocks visited in order, first fixed) to maximize
/// agreement of the between-block edge densities with a pattern where same
/// spins connect more: flip block k if that increases
/// sum over earlier blocks of (edges between equal spins - edges between unequal spins)
/// normalized by the expected counts.
std::vector<Spin> merge_block_partitions(const LabeledGraph& graph, std::span<const LabelBlock> blocks,
                                         std::span<const std::vector<Spin>> block_spins);

}  // namespace sidebp::learn
