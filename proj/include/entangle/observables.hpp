#pragma once

#include <complex>

#include "entangle/grid.hpp"

namespace entangle {

enum class Quadrature { position, momentum };

/// First and second raw moments of Q1, Q2, P1, P2 (momenta in units of hbar k).
struct MomentSet {
  double mean_q1 = 0, mean_q2 = 0, mean_p1 = 0, mean_p2 = 0;
  double m_q1q1 = 0, m_q2q2 = 0, m_p1p1 = 0, m_p2p2 = 0;
  double m_q1q2 = 0, m_p1p2 = 0;
  double hbar = 1.0;

  double var_q1() const { return m_q1q1 - mean_q1 * mean_q1; }
  double var_q2() const { return m_q2q2 - mean_q2 * mean_q2; }
  double var_p1() const { return m_p1p1 - mean_p1 * mean_p1; }
  double var_p2() const { return m_p2p2 - mean_p2 * mean_p2; }

  /// Quantum covariance functions <Q1 Q2> - <Q1><Q2> and <P1 P2> - <P1><P2>.
  double cov_q() const { return m_q1q2 - mean_q1 * mean_q2; }
  double cov_p() const { return m_p1p2 - mean_p1 * mean_p2; }

  /// Non-negative variances and Cauchy-Schwarz bounds on both covariances.
  bool invariants_hold() const;
};

/// <x1^e1 x2^e2> (position) or hbar^(e1+e2) <k1^e1 k2^e2> (momentum), by
/// quadrature over |amp|^2 in the matching basis. The state is transformed
/// first when it is in the other basis. UnsupportedOrder if e1 + e2 > 4.
double moment(const TwoParticleState& state, int e1, int e2, Quadrature which);

MomentSet moment_set(const TwoParticleState& state);

/// Closed-form moments of a GaussianSum from Gaussian integral identities,
/// including every cross-term overlap, normalized by the exact squared norm.
MomentSet analytic_moment_set(const GaussianSum& gsum);

/// Mean and variance of position and momentum for one particle.
struct Dispersion {
  double mean_q = 0, var_q = 0, mean_p = 0, var_p = 0;
  double hbar = 1.0;

  double dq() const;
  double dp() const;
  double product() const { return dq() * dp(); }
};

Dispersion dispersion(const SingleParticleState& state);

/// Dispersion of one particle's marginal distribution of a two-particle state.
Dispersion marginal_dispersion(const TwoParticleState& state, int particle);

enum class CommutatorTarget { particle1, particle2, extended };

/// <[Q, P]> for Q_i, P_i (particle1/particle2) or Qsum, Psum (extended),
/// evaluated by applying the operators to the state (Q diagonal in position,
/// P spectrally). BoundaryLeak when the state touches the edge of the
/// position box or momentum window by more than 1e-12 of its peak amplitude.
cplx expectation_of_commutator_qp(const TwoParticleState& state, CommutatorTarget which);

}  // namespace entangle
