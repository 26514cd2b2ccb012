#include "sidebp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "sidebp/error.hpp"

namespace sidebp {
namespace {

// Uniform random subset of size m from [0, total).
std::vector<std::uint64_t> floyd_subset(std::uint64_t total, std::uint64_t m, Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  std::vector<std::uint64_t> out;
  out.reserve(m);
  for (std::uint64_t j = total - m; j < total; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t t = pick(rng);
    const std::uint64_t value = chosen.insert(t).second ? t : j;
    if (value == j) chosen.insert(j);
    out.push_back(value);
  }
  return out;
}

// Pair index k in [0, s(s-1)/2) -> (i, j) with j < i, k = i(i-1)/2 + j.
std::pair<std::uint64_t, std::uint64_t> decode_triangle(std::uint64_t k) {
  auto i = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (i * (i - 1) / 2 > k) --i;
  while ((i + 1) * i / 2 <= k) ++i;
  return {i, k - i * (i - 1) / 2};
}

}  // namespace

std::vector<Edge> sample_block_edges(std::span<const std::uint32_t> block_sizes,
                                     const std::vector<std::vector<double>>& probs, Rng& rng) {
  const std::size_t blocks = block_sizes.size();
  if (probs.size() != blocks) throw ValidationError("probability matrix size mismatch");
  std::vector<std::uint64_t> start(blocks + 1, 0);
  for (std::size_t k = 0; k < blocks; ++k) {
    if (probs[k].size() != blocks) throw ValidationError("probability matrix size mismatch");
    start[k + 1] = start[k] + block_sizes[k];
  }

  std::vector<Edge> edges;
  for (std::size_t k = 0; k < blocks; ++k) {
    for (std::size_t l = k; l < blocks; ++l) {
      const double prob = probs[k][l];
      if (probs[l][k] != prob) throw ValidationError("block probabilities must be symmetric");
      const std::uint64_t sk = block_sizes[k];
      const std::uint64_t sl = block_sizes[l];
      const std::uint64_t pairs = k == l ? sk * (sk - (sk > 0 ? 1 : 0)) / 2 : sk * sl;
      // Blocks without pairs never use their probability.
      if (pairs == 0) continue;
      if (!(prob >= 0.0 && prob <= 1.0)) throw ValidationError("block probabilities must lie in [0, 1]");
      if (prob == 0.0) continue;
      std::binomial_distribution<std::uint64_t> count_dist(pairs, prob);
      const std::uint64_t m = count_dist(rng);
      for (std::uint64_t index : floyd_subset(pairs, m, rng)) {
        std::uint64_t u = 0;
        std::uint64_t v = 0;
        if (k == l) {
          const auto [i, j] = decode_triangle(index);
          u = start[k] + j;
          v = start[k] + i;
        } else {
          u = start[k] + index / sl;
          v = start[l] + index % sl;
        }
        edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  return edges;
}

LabeledGraph sample_sbm(const SbmParams& params, const LabelModel& labels, std::uint64_t seed) {
  params.validate();
  if (params.n > std::numeric_limits<std::uint32_t>::max() / 2) {
    throw ValidationError("n too large for 32-bit vertex ids");
  }
  const auto n = static_cast<std::uint32_t>(params.n);
  Rng rng = make_rng(seed);

  std::vector<Spin> spins(n);
  std::vector<LabelId> label(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    spins[i] = uniform01(rng) < params.p ? kPlus : kMinus;
    label[i] = static_cast<LabelId>(
        sample_categorical(spins[i] == kPlus ? labels.mu() : labels.nu(), rng));
  }

  // Sample on the spin-sorted order (plus block first), then map back.
  std::vector<VertexId> order;
  order.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) if (spins[i] == kPlus) order.push_back(i);
  const auto n_plus = static_cast<std::uint32_t>(order.size());
  for (std::uint32_t i = 0; i < n; ++i) if (spins[i] == kMinus) order.push_back(i);

  const std::uint32_t sizes[] = {n_plus, n - n_plus};
  const std::vector<std::vector<double>> probs = {
      {params.prob_plus_plus(), params.prob_plus_minus()},
      {params.prob_plus_minus(), params.prob_minus_minus()}};
  auto edges = sample_block_edges(sizes, probs, rng);
  for (Edge& e : edges) {
    e.u = order[e.u];
    e.v = order[e.v];
  }
  return LabeledGraph(n, edges, std::move(label), static_cast<std::uint32_t>(labels.size()),
                      std::move(spins));
}

std::vector<std::vector<std::uint32_t>> GwTree::children() const {
  std::vector<std::vector<std::uint32_t>> out(size());
  for (std::uint32_t v = 0; v < size(); ++v) {
    if (parent[v] != kNoParent) out[parent[v]].push_back(v);
  }
  return out;
}

LabeledGraph GwTree::to_graph(std::uint32_t num_labels) const {
  std::vector<Edge> edges;
  edges.reserve(size());
  for (std::uint32_t v = 0; v < size(); ++v) {
    if (parent[v] != kNoParent) edges.push_back({parent[v], v});
  }
  return LabeledGraph(static_cast<std::uint32_t>(size()), edges, label, num_labels, spin);
}

GwTree sample_gw_tree(const SbmParams& params, const LabelModel& labels,
                      const GwTreeOptions& options, std::uint64_t seed) {
  params.validate();
  double expected = 0.0;
  double level = 1.0;
  for (std::uint32_t k = 0; k <= options.depth; ++k) {
    expected += level;
    level *= params.d;
    if (expected > options.node_cap) {
      throw ValidationError("expected tree size exceeds node cap; reduce depth or degree");
    }
  }

  Rng rng = make_rng(seed);
  std::poisson_distribution<std::uint64_t> offspring(params.d);
  GwTree tree;
  tree.max_depth = options.depth;

  Spin root_spin = kPlus;
  switch (options.root_spin) {
    case RootSpinMode::kPrior: root_spin = uniform01(rng) < params.p ? kPlus : kMinus; break;
    case RootSpinMode::kPlus: root_spin = kPlus; break;
    case RootSpinMode::kMinus: root_spin = kMinus; break;
  }
  auto add_node = [&](std::uint32_t parent, std::uint32_t depth, Spin s) {
    tree.parent.push_back(parent);
    tree.depth.push_back(depth);
    tree.spin.push_back(s);
    tree.label.push_back(
        static_cast<LabelId>(sample_categorical(s == kPlus ? labels.mu() : labels.nu(), rng)));
  };
  add_node(GwTree::kNoParent, 0, root_spin);

  const double hard_cap = 10.0 * options.node_cap;
  for (std::uint32_t v = 0; v < tree.size(); ++v) {
    if (tree.depth[v] >= options.depth) continue;
    const std::uint64_t kids = offspring(rng);
    const double plus_prob = params.child_plus_probability(tree.spin[v] == kPlus);
    for (std::uint64_t k = 0; k < kids; ++k) {
      add_node(v, tree.depth[v] + 1, uniform01(rng) < plus_prob ? kPlus : kMinus);
    }
    if (static_cast<double>(tree.size()) > hard_cap) {
      throw ValidationError("sampled tree exceeded the node cap");
    }
  }
  return tree;
}

}  // namespace sidebp
