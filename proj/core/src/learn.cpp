#include "sidebp/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sidebp/error.hpp"
#include "sidebp/random.hpp"

namespace sidebp::learn {

EstimatedModel estimate_label_dists(const LabeledGraph& graph, std::span<const Spin> spins) {
  const std::uint32_t n = graph.num_vertices();
  if (spins.size() != n) throw ValidationError("spin estimates must have one entry per vertex");
  EstimatedModel est;
  const std::uint32_t L = graph.num_labels();
  std::vector<std::uint64_t> plus_counts(L, 0);
  std::vector<std::uint64_t> minus_counts(L, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (spins[v] == kPlus) {
      ++plus_counts[graph.label(v)];
      ++est.n_plus;
    } else if (spins[v] == kMinus) {
      ++minus_counts[graph.label(v)];
      ++est.n_minus;
    } else {
      throw ValidationError("spin estimates must be +1 or -1");
    }
  }
  if (est.n_plus == 0 || est.n_minus == 0) {
    throw ValidationError("both estimated classes must be nonempty");
  }
  for (std::uint32_t l = 0; l < L; ++l) {
    est.mu_hat.push_back(static_cast<double>(plus_counts[l]) / est.n_plus);
    est.nu_hat.push_back(static_cast<double>(minus_counts[l]) / est.n_minus);
  }
  est.p_hat = static_cast<double>(est.n_plus) / n;

  std::uint64_t pp = 0, pm = 0, mm = 0;
  for (const auto& e : graph.edge_list()) {
    const bool u = spins[e.u] == kPlus;
    const bool v = spins[e.v] == kPlus;
    if (u && v) ++pp;
    else if (!u && !v) ++mm;
    else ++pm;
  }
  const double m = static_cast<double>(graph.num_edges());
  est.d_hat = 2.0 * m / n;
  if (est.d_hat > 0.0) {
    const double np = est.n_plus;
    const double nm = est.n_minus;
    const double scale = static_cast<double>(n) / est.d_hat;
    est.a_hat = np > 1 ? scale * static_cast<double>(pp) / (np * (np - 1) / 2.0) : 0.0;
    est.b_hat = scale * static_cast<double>(pm) / (np * nm);
    est.c_hat = nm > 1 ? scale * static_cast<double>(mm) / (nm * (nm - 1) / 2.0) : 0.0;
  }
  return est;
}

std::vector<LabelBlock> kernel_split(const LabeledGraph& graph) {
  std::vector<std::vector<VertexId>> members(graph.num_labels());
  for (VertexId v = 0; v < graph.num_vertices(); ++v) members[graph.label(v)].push_back(v);
  std::vector<LabelBlock> blocks;
  for (LabelId l = 0; l < graph.num_labels(); ++l) {
    if (members[l].empty()) continue;
    LabelBlock block;
    block.label = l;
    block.vertices = std::move(members[l]);
    block.graph = induced_subgraph(graph, block.vertices);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

bool degree_separation_check(const SbmParams& params, const LabelModel& labels, LabelId label) {
  const double p = params.p;
  const double mu = labels.mu(label);
  const double nu = labels.nu(label);
  return std::abs(p * mu * params.a - (p * mu * params.b + p * nu * (params.a - params.b))) > 1e-12;
}

namespace {

void project_and_normalize(std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double norm = 0.0;
  for (double& v : x) {
    v -= mean;
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : x) v /= norm;
  }
}

}  // namespace

SpectralResult spectral_partition(const LabeledGraph& graph, std::uint32_t iterations,
                                  std::uint64_t seed, double tolerance) {
  const std::uint32_t n = graph.num_vertices();
  SpectralResult result;
  result.spins.assign(n, kPlus);
  if (n < 2) {
    result.converged = true;
    return result;
  }

  const auto comp = connected_components(graph);
  const std::uint32_t num_comp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::uint32_t> comp_size(num_comp, 0);
  for (auto c : comp) ++comp_size[c];
  const auto largest = static_cast<std::uint32_t>(
      std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());
  std::vector<VertexId> members;
  for (VertexId v = 0; v < n; ++v) {
    if (comp[v] == largest) members.push_back(v);
  }
  const LabeledGraph sub = induced_subgraph(graph, members);
  const std::uint32_t k = sub.num_vertices();
  if (k < 2) {
    result.converged = true;
    return result;
  }
  const double dbar = 2.0 * static_cast<double>(sub.num_edges()) / k;

  // A start vector built only from structural features would be symmetric
  // under every automorphism of the graph and could miss the eigenvector
  // entirely (two equal cliques joined by an edge), so it is per-vertex noise.
  std::vector<double> x(k);
  for (VertexId v = 0; v < k; ++v) {
    const std::uint64_t h = derive_seed(seed, members[v]);
    x[v] = 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
  }
  project_and_normalize(x);

  std::vector<double> y(k);
  for (std::uint32_t it = 0; it < iterations; ++it) {
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    for (VertexId v = 0; v < k; ++v) {
      double s = 0.0;
      for (VertexId u : sub.neighbors(v)) s += x[u];
      y[v] = s - dbar / k * total;
    }
    double rayleigh = 0.0;
    for (VertexId v = 0; v < k; ++v) rayleigh += x[v] * y[v];
    result.eigenvalue = rayleigh;
    project_and_normalize(y);
    double diff_same = 0.0;
    double diff_flip = 0.0;
    for (VertexId v = 0; v < k; ++v) {
      diff_same += (y[v] - x[v]) * (y[v] - x[v]);
      diff_flip += (y[v] + x[v]) * (y[v] + x[v]);
    }
    x.swap(y);
    result.iterations = it + 1;
    if (std::sqrt(std::min(diff_same, diff_flip)) < tolerance) {
      result.converged = true;
      break;
    }
  }
  for (VertexId v = 0; v < k; ++v) result.spins[members[v]] = x[v] >= 0.0 ? kPlus : kMinus;
  return result;
}

std::vector<Spin> merge_block_partitions(const LabeledGraph& graph, std::span<const LabelBlock> blocks,
                                         std::span<const std::vector<Spin>> block_spins) {
  if (blocks.size() != block_spins.size()) {
    throw ValidationError("one partition per block required");
  }
  const std::uint32_t n = graph.num_vertices();
  std::vector<Spin> global(n, kPlus);
  std::vector<std::int64_t> block_of(n, -1);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (block_spins[k].size() != blocks[k].vertices.size()) {
      throw ValidationError("block partition size mismatch");
    }
    for (std::size_t i = 0; i < blocks[k].vertices.size(); ++i) {
      global[blocks[k].vertices[i]] = block_spins[k][i];
      block_of[blocks[k].vertices[i]] = static_cast<std::int64_t>(k);
    }
  }

  for (std::size_t k = 1; k < blocks.size(); ++k) {
    // Density agreement between block k and the already-oriented blocks.
    double counts[2][2] = {{0, 0}, {0, 0}};  // [spin in k][spin elsewhere]
    double sizes_k[2] = {0, 0};
    double sizes_prev[2] = {0, 0};
    for (VertexId v : blocks[k].vertices) sizes_k[global[v] == kPlus ? 0 : 1] += 1;
    for (VertexId v = 0; v < n; ++v) {
      if (block_of[v] >= 0 && static_cast<std::size_t>(block_of[v]) < k) {
        sizes_prev[global[v] == kPlus ? 0 : 1] += 1;
      }
    }
    for (VertexId v : blocks[k].vertices) {
      for (VertexId u : graph.neighbors(v)) {
        if (block_of[u] < 0 || static_cast<std::size_t>(block_of[u]) >= k) continue;
        counts[global[v] == kPlus ? 0 : 1][global[u] == kPlus ? 0 : 1] += 1;
      }
    }
    auto density = [&](int s, int t) {
      const double pairs = sizes_k[s] * sizes_prev[t];
      return pairs > 0 ? counts[s][t] / pairs : 0.0;
    };
    const double agreement = density(0, 0) + density(1, 1) - density(0, 1) - density(1, 0);
    if (agreement < 0.0) {
      for (VertexId v : blocks[k].vertices) global[v] = static_cast<Spin>(-global[v]);
    }
  }
  return global;
}

}  // namespace sidebp::learn
