#include "entangle/operators.hpp"

#include <cmath>
#include <variant>

#include <fmt/format.h>

#include "entangle/error.hpp"
#include "entangle/spectral.hpp"

namespace entangle {

struct Scaled {
  cplx factor;
  OperatorExpr expr;
};
struct Sum {
  OperatorExpr lhs, rhs;
};
struct Product {
  OperatorExpr lhs, rhs;
};

struct OperatorExpr::Node {
  std::variant<Atom, Scaled, Sum, Product> value;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

OperatorExpr OperatorExpr::atom(Atom a) { return OperatorExpr(std::make_shared<const Node>(Node{a})); }

OperatorExpr OperatorExpr::qsum() { return q1() + q2(); }
OperatorExpr OperatorExpr::psum() { return p1() + p2(); }

OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) {
  return OperatorExpr(std::make_shared<const OperatorExpr::Node>(OperatorExpr::Node{Sum{a, b}}));
}

OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) { return a + cplx{-1.0, 0.0} * b; }

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  return OperatorExpr(std::make_shared<const OperatorExpr::Node>(OperatorExpr::Node{Product{a, b}}));
}

OperatorExpr operator*(cplx s, const OperatorExpr& a) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
    throw Error(ErrorKind::InvalidArgument, "operator scalars must be finite");
  return OperatorExpr(std::make_shared<const OperatorExpr::Node>(OperatorExpr::Node{Scaled{s, a}}));
}

OperatorExpr OperatorExpr::adjoint() const {
  return std::visit(Overloaded{
                        [&](Atom) { return *this; },
                        [](const Scaled& s) { return std::conj(s.factor) * s.expr.adjoint(); },
                        [](const Sum& s) { return s.lhs.adjoint() + s.rhs.adjoint(); },
                        [](const Product& p) { return p.rhs.adjoint() * p.lhs.adjoint(); },
                    },
                    node_->value);
}

std::string OperatorExpr::to_string() const {
  return std::visit(Overloaded{
                        [](Atom a) -> std::string {
                          switch (a) {
                            case Atom::identity: return "I";
                            case Atom::q1: return "Q1";
                            case Atom::q2: return "Q2";
                            case Atom::p1: return "P1";
                            case Atom::p2: return "P2";
                            case Atom::exchange: return "P21";
                          }
                          return "?";
                        },
                        [](const Scaled& s) {
                          return fmt::format("({:g}{:+g}i) {}", s.factor.real(), s.factor.imag(),
                                             s.expr.to_string());
                        },
                        [](const Sum& s) { return fmt::format("({} + {})", s.lhs.to_string(), s.rhs.to_string()); },
                        [](const Product& p) {
                          return fmt::format("({} {})", p.lhs.to_string(), p.rhs.to_string());
                        },
                    },
                    node_->value);
}

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------
// Application to amplitude grids

namespace {

using Field = std::vector<cplx>;

Field apply_atom(Atom a, const GridSpec& g, double hbar, const Field& v) {
  const std::size_t n = g.n();
  Field out(v.size());
  switch (a) {
    case Atom::identity: return v;
    case Atom::q1:
    case Atom::q2:
      for (std::size_t j1 = 0; j1 < n; ++j1)
        for (std::size_t j2 = 0; j2 < n; ++j2)
          out[j1 * n + j2] = v[j1 * n + j2] * g.x(a == Atom::q1 ? j1 : j2);
      return out;
    case Atom::p1:
    case Atom::p2: {
      Field phi = spectral::to_momentum_2d(g, v);
      for (std::size_t m1 = 0; m1 < n; ++m1)
        for (std::size_t m2 = 0; m2 < n; ++m2) phi[m1 * n + m2] *= hbar * g.k(a == Atom::p1 ? m1 : m2);
      return spectral::to_position_2d(g, phi);
    }
    case Atom::exchange:
      for (std::size_t j1 = 0; j1 < n; ++j1)
        for (std::size_t j2 = 0; j2 < n; ++j2) out[j2 * n + j1] = v[j1 * n + j2];
      return out;
  }
  return out;
}

Field apply_field(const OperatorExpr& e, const GridSpec& g, double hbar, const Field& v) {
  return std::visit(Overloaded{
                        [&](Atom a) { return apply_atom(a, g, hbar, v); },
                        [&](const Scaled& s) {
                          Field out = apply_field(s.expr, g, hbar, v);
                          for (auto& x : out) x *= s.factor;
                          return out;
                        },
                        [&](const Sum& s) {
                          Field out = apply_field(s.lhs, g, hbar, v);
                          const Field r = apply_field(s.rhs, g, hbar, v);
                          for (std::size_t i = 0; i < out.size(); ++i) out[i] += r[i];
                          return out;
                        },
                        [&](const Product& p) { return apply_field(p.lhs, g, hbar, apply_field(p.rhs, g, hbar, v)); },
                    },
                    e.node().value);
}

}  // namespace

std::vector<cplx> apply(const OperatorExpr& expr, const TwoParticleState& state) {
  const TwoParticleState pos = to_basis(state, Basis::position);
  return apply_field(expr, pos.grid(), pos.hbar(), Field(pos.amps().begin(), pos.amps().end()));
}

cplx expectation(const OperatorExpr& expr, const TwoParticleState& state) {
  const TwoParticleState pos = to_basis(state, Basis::position);
  const Field out = apply_field(expr, pos.grid(), pos.hbar(), Field(pos.amps().begin(), pos.amps().end()));
  cplx acc{};
  const auto a = pos.amps();
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * out[i];
  return acc * pos.weight();
}

// ---------------------------------------------------------------------------
// Dense materialization

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index na = a.rows();
  const Eigen::Index nb = b.rows();
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
  return out;
}

ComplexMatrix position_matrix(const GridSpec& g) {
  const auto n = static_cast<Eigen::Index>(g.n());
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) x(j, j) = g.x(static_cast<std::size_t>(j));
  return x;
}

// hbar F^dag diag(k) F with F(m, j) = exp(-i k_m x_j) / sqrt(n).
ComplexMatrix momentum_matrix(const GridSpec& g, double hbar) {
  const auto n = static_cast<Eigen::Index>(g.n());
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix f(n, n);
  Eigen::VectorXcd k(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    k(m) = hbar * g.k(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < n; ++j)
      f(m, j) = std::polar(inv_sqrt_n, -g.k(static_cast<std::size_t>(m)) * g.x(static_cast<std::size_t>(j)));
  }
  return f.adjoint() * k.asDiagonal() * f;
}

ComplexMatrix exchange_matrix(const GridSpec& g) {
  const auto n = static_cast<Eigen::Index>(g.n());
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) s(b * n + a, a * n + b) = 1.0;
  return s;
}

struct MatrixAtoms {
  ComplexMatrix identity, q1, q2, p1, p2, exchange;
};

MatrixAtoms build_atoms(const GridSpec& g, double hbar) {
  const auto n = static_cast<Eigen::Index>(g.n());
  const ComplexMatrix one = ComplexMatrix::Identity(n, n);
  const ComplexMatrix x = position_matrix(g);
  const ComplexMatrix p = momentum_matrix(g, hbar);
  return {ComplexMatrix::Identity(n * n, n * n), kron(x, one), kron(one, x), kron(p, one), kron(one, p),
          exchange_matrix(g)};
}

ComplexMatrix evaluate(const OperatorExpr& e, const MatrixAtoms& m) {
  return std::visit(Overloaded{
                        [&](Atom a) -> ComplexMatrix {
                          switch (a) {
                            case Atom::identity: return m.identity;
                            case Atom::q1: return m.q1;
                            case Atom::q2: return m.q2;
                            case Atom::p1: return m.p1;
                            case Atom::p2: return m.p2;
                            case Atom::exchange: return m.exchange;
                          }
                          return m.identity;
                        },
                        [&](const Scaled& s) -> ComplexMatrix { return s.factor * evaluate(s.expr, m); },
                        [&](const Sum& s) -> ComplexMatrix { return evaluate(s.lhs, m) + evaluate(s.rhs, m); },
                        [&](const Product& p) -> ComplexMatrix { return evaluate(p.lhs, m) * evaluate(p.rhs, m); },
                    },
                    e.node().value);
}

}  // namespace

ComplexMatrix materialize(const OperatorExpr& expr, const GridSpec& grid, double hbar) {
  if (grid.n() > 16)
    throw Error(ErrorKind::GridTooLarge, fmt::format("materialize needs n <= 16, got n = {}", grid.n()));
  if (!(hbar > 0.0)) throw Error(ErrorKind::InvalidArgument, "hbar must be positive");
  return evaluate(expr, build_atoms(grid, hbar));
}

CommutatorReport commutator_residual(const OperatorExpr& a, const OperatorExpr& b, const GridSpec& grid,
                                     double hbar, double tol) {
  const ComplexMatrix ma = materialize(a, grid, hbar);
  const ComplexMatrix mb = materialize(b, grid, hbar);
  const double denom = ma.norm() * mb.norm();
  CommutatorReport r;
  r.dim = static_cast<std::size_t>(ma.rows());
  r.tol = tol;
  r.residual = denom > 0.0 ? (ma * mb - mb * ma).norm() / denom : 0.0;
  r.is_physical = r.residual <= tol;
  return r;
}

}  // namespace entangle
