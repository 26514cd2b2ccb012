#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sidebp {

using VertexId = std::uint32_t;
using LabelId = std::uint32_t;
using Spin = std::int8_t;  // +1 or -1

inline constexpr Spin kPlus = 1;
inline constexpr Spin kMinus = -1;

struct Edge {
  VertexId u;
  VertexId v;
  bool operator==(const Edge&) const = default;
};

/// Undirected simple graph in compressed sparse row form, with a hidden
/// per-vertex spin (optional, synthetic data only) and an observed label.
///
/// Every undirected edge {i, j} appears as two directed slots: slot s in
/// row i points to j, and reverse_slot(s) is the slot in row j pointing back
/// to i. Neighbor lists are sorted ascending.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  /// Builds the CSR structure. Throws ValidationError on self-loops,
  /// duplicate edges, out-of-range endpoints or labels, or a spin vector of
  /// the wrong length (empty means "spins unknown").
  LabeledGraph(std::uint32_t n, std::span<const Edge> edges, std::vector<LabelId> labels,
               std::uint32_t num_labels, std::vector<Spin> spins = {});

  std::uint32_t num_vertices() const noexcept { return n_; }
  std::uint64_t num_edges() const noexcept { return neighbors_.size() / 2; }
  std::uint32_t num_labels() const noexcept { return num_labels_; }

  std::uint32_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::uint64_t row_begin(VertexId v) const { return offsets_[v]; }
  std::uint64_t row_end(VertexId v) const { return offsets_[v + 1]; }
  std::uint64_t num_slots() const noexcept { return neighbors_.size(); }
  VertexId slot_target(std::uint64_t slot) const { return neighbors_[slot]; }
  std::uint64_t reverse_slot(std::uint64_t slot) const { return reverse_[slot]; }

  LabelId label(VertexId v) const { return labels_[v]; }
  const std::vector<LabelId>& labels() const noexcept { return labels_; }

  bool has_spins() const noexcept { return !spins_.empty(); }
  Spin spin(VertexId v) const { return spins_.at(v); }
  const std::vector<Spin>& spins() const noexcept { return spins_; }

  /// Edges with u < v, in row order.
  std::vector<Edge> edge_list() const;

  bool operator==(const LabeledGraph&) const = default;

 private:
  std::uint32_t n_ = 0;
  std::uint32_t num_labels_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<VertexId> neighbors_;
  std::vector<std::uint64_t> reverse_;
  std::vector<LabelId> labels_;
  std::vector<Spin> spins_;
};

/// Induced subgraph on `vertices` (sorted, unique). Vertex k of the result
/// corresponds to vertices[k]; labels and spins are carried over.
LabeledGraph induced_subgraph(const LabeledGraph& graph, std::span<const VertexId> vertices);

/// Connected-component id per vertex, ids assigned in order of smallest vertex.
std::vector<std::uint32_t> connected_components(const LabeledGraph& graph);

}  // namespace sidebp
