#pragma once

// Property checks shared by the standalone property runner, the unit tests
// and the acceptance suite.

#include <cstdint>
#include <string>
#include <vector>

namespace sidebp::testing {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// run_bp root belief == tree_recursion on random Galton-Watson trees,
/// compared with ==, over `cases` random (params, labels, depth, seed).
PropertyResult check_bp_tree_equivalence(std::uint32_t cases, std::uint64_t seed);

/// On random cells: G nondecreasing on a 1e-3 grid of [0, 2 tilde_alpha1]
/// (slack 1e-10) and 0 <= G <= lambda/(p(1-p)).
PropertyResult check_g_monotone_bounded(std::uint32_t cases, std::uint64_t seed);

/// predicted_success without prior bias at alpha = 0 equals dtv_labels, and
/// tends to it as alpha -> 0.
PropertyResult check_success_limit(std::uint32_t cases, std::uint64_t seed);

/// Same seed, same output (samplers, BP, tree Monte Carlo, end-to-end,
/// spectral), independent of the worker thread count.
PropertyResult check_determinism();

std::vector<PropertyResult> run_all_properties();

}  // namespace sidebp::testing
