#pragma once

// Two-particle operator expressions built from the single-particle atoms
// extended to the pair space (Q1 = Q (x) I, Q2 = I (x) Q, ...), plus the
// particle-exchange operator P21. Expressions can be applied to a state or
// materialized as dense matrices on small grids.

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entangle/grid.hpp"

namespace entangle {

enum class Atom { identity, q1, q2, p1, p2, exchange };

class OperatorExpr {
 public:
  struct Node;

  static OperatorExpr atom(Atom a);
  static OperatorExpr identity() { return atom(Atom::identity); }
  static OperatorExpr q1() { return atom(Atom::q1); }
  static OperatorExpr q2() { return atom(Atom::q2); }
  static OperatorExpr p1() { return atom(Atom::p1); }
  static OperatorExpr p2() { return atom(Atom::p2); }
  /// Permutation operator swapping particle labels.
  static OperatorExpr p21() { return atom(Atom::exchange); }
  /// Extended position Q(1,2) = Q1 + Q2.
  static OperatorExpr qsum();
  /// Extended momentum P(1,2) = P1 + P2.
  static OperatorExpr psum();

  friend OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b);
  friend OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b);
  /// Composition: (a * b) applies b first.
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
  friend OperatorExpr operator*(cplx s, const OperatorExpr& a);

  /// Hermitian adjoint; every atom is self-adjoint so this only reverses
  /// products and conjugates scalars.
  OperatorExpr adjoint() const;

  std::string to_string() const;

  const Node& node() const { return *node_; }

 private:
  explicit OperatorExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// [a, b] = ab - ba.
OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b);

/// Applies `expr` to the state's amplitudes; the result is returned as raw
/// (unnormalized) position-basis amplitudes on the state's grid.
std::vector<cplx> apply(const OperatorExpr& expr, const TwoParticleState& state);

/// <state| expr |state>.
cplx expectation(const OperatorExpr& expr, const TwoParticleState& state);

using ComplexMatrix = Eigen::MatrixXcd;

/// Dense n^2 x n^2 matrix of `expr` in the row-major (j1, j2) position basis.
/// GridTooLarge when n > 16.
ComplexMatrix materialize(const OperatorExpr& expr, const GridSpec& grid, double hbar = 1.0);

struct CommutatorReport {
  double residual = 0.0;  ///< ||AB - BA||_F / (||A||_F ||B||_F)
  std::size_t dim = 0;
  bool is_physical = false;
  double tol = 1e-10;
};

/// Relative Frobenius residual of [a, b]. With b = P21 this is the
/// physical-observable test: is_physical iff residual <= tol.
CommutatorReport commutator_residual(const OperatorExpr& a, const OperatorExpr& b, const GridSpec& grid,
                                     double hbar = 1.0, double tol = 1e-10);

}  // namespace entangle
