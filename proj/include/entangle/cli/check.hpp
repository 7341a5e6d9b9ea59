#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "entangle/cli/config.hpp"
#include "entangle/observables.hpp"

namespace entangle::cli {

/// Test-build seam: applied to every moment set of the relation property
/// before evaluation. Production binaries leave it empty.
struct CheckHooks {
  std::function<void(int case_index, MomentSet& ms)> tamper;
};

struct PropertyOutcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  ///< property-specific extreme (see check.cpp)
  std::string first_failure;  ///< case index, seed and full parameters
  bool passed() const { return failures == 0; }
};

struct CheckResult {
  std::uint64_t seed = 0;
  int count = 0;
  double hbar = 1.0;
  std::vector<PropertyOutcome> properties;
  bool passed() const;
};

/// Randomized invariant suite. Every case draws from its own generator seeded
/// by (seed, property, case index), so any failing case can be replayed alone.
CheckResult run_check(const CheckConfig& cfg, double hbar, const CheckHooks& hooks = {});

std::string render_check(const CheckResult& result, OutputFormat format, int precision);

}  // namespace entangle::cli
