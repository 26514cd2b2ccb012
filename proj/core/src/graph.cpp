#include "sidebp/graph.hpp"

#include <algorithm>
#include <string>

#include "sidebp/error.hpp"

namespace sidebp {

LabeledGraph::LabeledGraph(std::uint32_t n, std::span<const Edge> edges,
                           std::vector<LabelId> labels, std::uint32_t num_labels,
                           std::vector<Spin> spins)
    : n_(n), num_labels_(num_labels), labels_(std::move(labels)), spins_(std::move(spins)) {
  if (labels_.size() != n_) throw ValidationError("label vector length differs from n");
  if (!spins_.empty() && spins_.size() != n_) {
    throw ValidationError("spin vector length differs from n");
  }
  for (LabelId l : labels_) {
    if (l >= num_labels_) throw ValidationError("label index " + std::to_string(l) + " out of range");
  }
  for (Spin s : spins_) {
    if (s != kPlus && s != kMinus) throw ValidationError("spins must be +1 or -1");
  }

  std::vector<std::uint64_t> degree(n_, 0);
  for (const Edge& e : edges) {
    if (e.u >= n_ || e.v >= n_) throw ValidationError("edge endpoint out of range");
    if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (std::uint32_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];

  neighbors_.resize(offsets_[n_]);
  std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges) {
    neighbors_[cursor[e.u]++] = e.v;
    neighbors_[cursor[e.v]++] = e.u;
  }
  for (std::uint32_t v = 0; v < n_; ++v) {
    auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) {
      throw ValidationError("duplicate edge at vertex " + std::to_string(v));
    }
  }

  // Slot of i inside row j, for every slot (i -> j).
  reverse_.resize(neighbors_.size());
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint64_t s = offsets_[i]; s < offsets_[i + 1]; ++s) {
      const VertexId j = neighbors_[s];
      if (j < i) continue;
      auto row_first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[j]);
      auto row_last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[j + 1]);
      const auto back = static_cast<std::uint64_t>(
          std::lower_bound(row_first, row_last, i) - neighbors_.begin());
      reverse_[s] = back;
      reverse_[back] = s;
    }
  }
}

std::vector<Edge> LabeledGraph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (VertexId j : neighbors(i)) {
      if (i < j) out.push_back({i, j});
    }
  }
  return out;
}

LabeledGraph induced_subgraph(const LabeledGraph& graph, std::span<const VertexId> vertices) {
  constexpr auto kAbsent = static_cast<VertexId>(-1);
  std::vector<VertexId> local(graph.num_vertices(), kAbsent);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (vertices[k] >= graph.num_vertices()) throw ValidationError("subgraph vertex out of range");
    if (local[vertices[k]] != kAbsent) throw ValidationError("subgraph vertex listed twice");
    local[vertices[k]] = static_cast<VertexId>(k);
  }
  std::vector<Edge> edges;
  std::vector<LabelId> labels;
  std::vector<Spin> spins;
  labels.reserve(vertices.size());
  for (VertexId v : vertices) {
    labels.push_back(graph.label(v));
    if (graph.has_spins()) spins.push_back(graph.spin(v));
    for (VertexId u : graph.neighbors(v)) {
      if (local[u] != kAbsent && v < u) edges.push_back({local[v], local[u]});
    }
  }
  return LabeledGraph(static_cast<std::uint32_t>(vertices.size()), edges, std::move(labels),
                      graph.num_labels(), std::move(spins));
}

std::vector<std::uint32_t> connected_components(const LabeledGraph& graph) {
  constexpr auto kUnseen = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> component(graph.num_vertices(), kUnseen);
  std::vector<VertexId> stack;
  std::uint32_t next = 0;
  for (VertexId root = 0; root < graph.num_vertices(); ++root) {
    if (component[root] != kUnseen) continue;
    component[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (VertexId u : graph.neighbors(v)) {
        if (component[u] == kUnseen) {
          component[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return component;
}

}  // namespace sidebp
