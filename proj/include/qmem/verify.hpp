#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qmem {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Randomised invariant checks over every module plus the three navigation
/// demos. `on_result` is called as each check finishes.
std::vector<CheckResult> run_invariant_suite(
    std::uint64_t seed, const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace qmem
