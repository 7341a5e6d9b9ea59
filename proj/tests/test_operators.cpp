#include <doctest.h>

#include "entangle/error.hpp"
#include "entangle/operators.hpp"
#include "entangle/scenarios.hpp"
#include "test_support.hpp"

using namespace entangle;
using E = OperatorExpr;

namespace {
const GridSpec kSmall(8, 0.7);
}

TEST_CASE("materialize: identity and hermiticity") {
  const ComplexMatrix id = materialize(E::identity(), kSmall);
  CHECK(id.rows() == 64);
  CHECK((id - ComplexMatrix::Identity(64, 64)).norm() == 0.0);

  for (const E& e : {E::qsum(), E::psum(), E::q1() * E::q2(), E::p1() * E::p2()}) {
    const ComplexMatrix m = materialize(e, kSmall, 1.3);
    CHECK((m - m.adjoint()).norm() <= 1e-12 * m.norm());
  }
}

TEST_CASE("materialize: exchange matrix is a hermitian involution") {
  const ComplexMatrix s = materialize(E::p21(), kSmall);
  CHECK((s * s - ComplexMatrix::Identity(64, 64)).norm() == 0.0);
  CHECK((s - s.adjoint()).norm() == 0.0);
}

TEST_CASE("materialize: size guard") {
  CHECK_NOTHROW(materialize(E::q1(), GridSpec(16, 0.5)));
  try {
    materialize(E::q1(), GridSpec(32, 0.5));
    FAIL("expected GridTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridTooLarge);
  }
}

TEST_CASE("commutator_residual: extended operators are physical, single-particle ones are not") {
  const auto qs = commutator_residual(E::qsum(), E::p21(), kSmall);
  CHECK(qs.residual <= 1e-12);
  CHECK(qs.is_physical);
  CHECK(qs.dim == 64);
  CHECK(commutator_residual(E::psum(), E::p21(), kSmall).residual <= 1e-12);

  const auto q1 = commutator_residual(E::q1(), E::p21(), kSmall);
  CHECK(q1.residual > 1e-2);
  CHECK_FALSE(q1.is_physical);
  CHECK(commutator_residual(E::p1(), E::p21(), kSmall).residual > 1e-2);

  // Any exchange-symmetric combination is physical, e.g. the total angular-
  // momentum-like sum structure A(1) B(2) + B(1) A(2).
  const E sym = E::q1() * E::p2() + E::p1() * E::q2();
  CHECK(commutator_residual(sym, E::p21(), kSmall).is_physical);
}

TEST_CASE("conjugation by P21 relabels particles") {
  const E s = E::p21();
  const auto diff = [](const E& a, const E& b) {
    return (materialize(a, kSmall) - materialize(b, kSmall)).norm();
  };
  CHECK(diff(s * E::q1() * s.adjoint(), E::q2()) <= 1e-12);
  CHECK(diff(s * E::p1() * s.adjoint(), E::p2()) <= 1e-12);
  CHECK(diff(s * (E::q1() * E::p2()) * s.adjoint(), E::q2() * E::p1()) <= 1e-12);
}

TEST_CASE("adjoint reverses products and conjugates scalars") {
  const E e = cplx{0.0, 2.0} * (E::q1() * E::p1());
  const ComplexMatrix m = materialize(e, kSmall);
  CHECK((materialize(e.adjoint(), kSmall) - m.adjoint()).norm() <= 1e-12 * m.norm());
  CHECK(e.adjoint().to_string() == "(0-2i) (P1 Q1)");
}

TEST_CASE("apply agrees with the dense matrix on a small grid") {
  const GridSpec g(16, 0.6);
  const auto st = entangle::testing::gaussian_product(g, 0.9, 1.1, 0.3, -0.2, 0.8);
  const E e = E::qsum() * E::psum() + cplx{0.5, 0.0} * E::p21() * E::q1();
  const ComplexMatrix m = materialize(e, g, 0.8);
  Eigen::VectorXcd v(256);
  for (int i = 0; i < 256; ++i) v(i) = st.amps()[static_cast<std::size_t>(i)];
  const Eigen::VectorXcd want = m * v;
  const auto got = apply(e, st);
  double err = 0.0;
  for (int i = 0; i < 256; ++i) err += std::norm(got[static_cast<std::size_t>(i)] - want(i));
  CHECK(std::sqrt(err) <= 1e-12 * want.norm());
}

TEST_CASE("expectation of the exchange operator is 1 on symmetric states") {
  const auto st = synthesize(paper_state(1.0, 1.0), GridSpec(128, 0.12));
  CHECK(std::abs(expectation(E::p21(), st) - 1.0) < 1e-12);
}
