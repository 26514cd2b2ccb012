#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "sidebp/bp.hpp"
#include "sidebp/error.hpp"
#include "sidebp/sampling.hpp"
#include "sidebp/stats.hpp"
#include "sidebp/tree_monte_carlo.hpp"

using namespace sidebp;

namespace {

// Root statistics from explicit trees and from the compact sampler, for a
// fixed root spin. The two must share a law.
void compare_with_explicit_trees(const SbmParams& params, const LabelModel& labels,
                                 std::uint32_t depth, Spin root, int samples) {
  GwTreeOptions opts;
  opts.depth = depth;
  opts.root_spin = root == kPlus ? RootSpinMode::kPlus : RootSpinMode::kMinus;
  std::vector<double> tree_values(samples), compact_values(samples);
  for (int k = 0; k < samples; ++k) {
    const auto tree = sample_gw_tree(params, labels, opts, derive_seed(1, k));
    tree_values[k] = bp::tree_recursion(tree, params, labels, depth);
  }
  const TreeStatisticSampler sampler(params, labels, depth);
  Rng rng = make_rng(2);
  for (auto& v : compact_values) v = sampler(root, rng).xi;
  const auto ks = stats::ks_two_sample(tree_values, compact_values);
  EXPECT_GT(ks.p_value, 1e-3) << "depth " << depth << " root " << int(root) << " D " << ks.statistic;
  const auto a = stats::summarize(tree_values);
  const auto b = stats::summarize(compact_values);
  EXPECT_NEAR(a.mean, b.mean, 4.0 * std::hypot(a.standard_error, b.standard_error));
}

}  // namespace

TEST(TreeStatisticSampler, RejectsDepthZero) {
  const auto params = params_from_scaling({0.5, 0.8, 0.2}, 100000);
  EXPECT_THROW(TreeStatisticSampler(params, LabelModel::noisy(0.85), 0), ValidationError);
}

TEST(TreeStatisticSampler, FieldIsRootLabelTerm) {
  const auto params = params_from_scaling({0.3, 0.8, 0.3}, 100000);
  const auto labels = LabelModel::noisy(0.8);
  const TreeStatisticSampler sampler(params, labels, 2);
  const auto ch = bp::ChannelFunctions::make(params, labels);
  Rng rng = make_rng(4);
  for (int k = 0; k < 100; ++k) {
    const auto s = sampler(kPlus, rng);
    EXPECT_TRUE(s.field == ch.h[0] + ch.w || s.field == ch.h[1] + ch.w);
  }
}

TEST(TreeStatisticSampler, MatchesExplicitTreesDepthOne) {
  const auto params = params_from_scaling({0.3, 0.9, 0.3}, 100000);
  compare_with_explicit_trees(params, LabelModel::noisy(0.8, 0.7), 1, kPlus, 4000);
  compare_with_explicit_trees(params, LabelModel::noisy(0.8, 0.7), 1, kMinus, 4000);
}

TEST(TreeStatisticSampler, MatchesExplicitTreesDepthTwoTabulated) {
  const auto params = params_from_scaling({0.5, 0.8, 0.3}, 100000);
  compare_with_explicit_trees(params, LabelModel::noisy(0.85), 2, kPlus, 4000);
  compare_with_explicit_trees(params, LabelModel::revealed(0.3), 2, kMinus, 4000);
}

TEST(TreeStatisticSampler, MatchesExplicitTreesDepthThree) {
  const auto params = params_from_scaling({0.4, 0.6, 0.5}, 100000);
  compare_with_explicit_trees(params, LabelModel::noisy(0.7), 3, kPlus, 3000);
}

TEST(TreeStatisticSampler, ManyLabelsUseTheRecursivePath) {
  // Ten labels make the depth-1 message table too large to build.
  std::vector<std::string> names;
  std::vector<double> mu, nu;
  for (int l = 0; l < 10; ++l) {
    names.push_back("l" + std::to_string(l));
    mu.push_back(0.1);
    nu.push_back(l < 5 ? 0.15 : 0.05);
  }
  const LabelModel labels(names, mu, nu);
  const auto params = params_from_scaling({0.5, 0.8, 0.25}, 100000);
  compare_with_explicit_trees(params, labels, 2, kPlus, 3000);
}
