// Standalone property runner: one line per property, nonzero exit on failure.

#include <iostream>

#include "properties.hpp"

int main() {
  bool ok = true;
  for (const auto& r : sidebp::testing::run_all_properties()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}
