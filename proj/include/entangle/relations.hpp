#pragma once

#include <optional>

#include "entangle/observables.hpp"

namespace entangle {

/// One side of an uncertainty inequality: value >= bound, within a relative
/// tolerance of 1e-9 on the bound.
struct BoundCheck {
  double value = 0.0;
  double bound = 0.0;
  bool satisfied = false;
  double slack = 0.0;  ///< value - bound
};

/// Form of the extended relation that assumes Delta Q1 = Delta Q2:
/// (var_q2 + cov_q) ((var_p1 + var_p2) / 2 + cov_p) >= hbar^2 / 4.
struct SymmetricForm : BoundCheck {
  bool applicable = false;
  double mismatch = 0.0;  ///< |dQ1 - dQ2| / max(dQ1, dQ2)
};

struct UncertaintyReport {
  BoundCheck heis_1;  ///< dQ1 dP1 >= hbar / 2
  BoundCheck heis_2;  ///< dQ2 dP2 >= hbar / 2
  /// (var_q1 + var_q2 + 2 cov_q)(var_p1 + var_p2 + 2 cov_p) >= hbar^2, i.e.
  /// the variance product of the extended operators Q1 + Q2 and P1 + P2.
  BoundCheck general;
  /// Present only when the position dispersions agree within the threshold.
  std::optional<SymmetricForm> symmetric_form;
  double position_mismatch = 0.0;
  /// The two factors of `general` (extended-operator variances).
  double q_factor = 0.0;
  double p_factor = 0.0;
};

inline constexpr double kDefaultSymmetricThreshold = 1e-6;

/// Evaluates the per-particle and extended relations on a moment set.
/// NegativeVarianceFactor if either factor of the extended product is below
/// -1e-9.
UncertaintyReport evaluate_relations(const MomentSet& ms,
                                     double symmetric_threshold = kDefaultSymmetricThreshold);

}  // namespace entangle
