#include <doctest.h>

#include "entangle/error.hpp"
#include "entangle/scenarios.hpp"
#include "test_support.hpp"

using namespace entangle;
using entangle::testing::gaussian_1d;
using entangle::testing::gaussian_product;

namespace {

const GridSpec kPopperGrid(512, 0.02);

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an entangle::Error");
  return ErrorKind::InvalidArgument;
}

SlitWindow slit(double width, double center = 0.0) { return SlitWindow{center, width}; }

}  // namespace

TEST_CASE("paper_state builds two mirrored anticorrelated terms") {
  const GaussianSum gs = paper_state(2.0, 1.0);
  REQUIRE(gs.terms().size() == 2);
  const auto& t0 = gs.terms()[0];
  const auto& t1 = gs.terms()[1];
  CHECK(t0.mu1 == 1.0);
  CHECK(t0.mu2 == -1.0);
  CHECK(t1.mu1 == -1.0);
  CHECK(t1.mu2 == 1.0);
  CHECK(t0.sigma1 == 0.5);
  CHECK(t1.sigma2 == 0.5);
  CHECK(t0.coeff == t1.coeff);
  CHECK(kind_of([] { paper_state(0.0, 1.0); }) == ErrorKind::InvalidArgument);

  const MomentSet zero = moment_set(synthesize(paper_state(1.0, 0.0), GridSpec(256, 0.08)));
  CHECK(std::abs(zero.cov_q()) <= 1e-9);
  CHECK(std::abs(zero.cov_p()) <= 1e-9);
}

TEST_CASE("compare_with_paper: means vanish, signs match, ratios recorded") {
  const auto pc = compare_with_paper(1.0, 0.05, GridSpec(256, 0.08));
  CHECK(pc.computed.mean_q1 == 0.0);
  CHECK(pc.computed.mean_p2 == 0.0);
  CHECK(pc.computed.m_q1q2 > 0.0);
  CHECK(pc.computed.m_p1p2 < 0.0);
  CHECK(pc.oracle_agreement);
  CHECK(pc.quoted_x1x2 == doctest::Approx(0.05 * 0.05 / 2));
  CHECK(pc.quoted_p1p2 == doctest::Approx(-2 * 0.05 * 0.05));
  // Frozen from the scipy quadrature oracle divided by the quoted constants.
  CHECK(pc.ratio_x == doctest::Approx(0.00031210937520345113 / 0.00125).epsilon(1e-9));
  CHECK(pc.ratio_p == doctest::Approx(0.001251562499186198 / 0.005).epsilon(1e-9));
  CHECK(std::abs(pc.grid_p1p2 / pc.computed.m_p1p2 - 1) < 1e-8);
}

TEST_CASE("compare_with_paper: preconditions") {
  CHECK(kind_of([] { compare_with_paper(1.0, 0.0, GridSpec(256, 0.08)); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { compare_with_paper(1.0, 1.0, GridSpec(8, 4.0)); }) == ErrorKind::GridTooCoarse);
}

TEST_CASE("slit window profiles") {
  const SlitWindow rect{0.5, 1.0};
  CHECK(rect(0.5) == 1.0);
  CHECK(rect(1.0) == 1.0);
  CHECK(rect(1.01) == 0.0);
  const SlitWindow smooth{0.0, 1.0, SlitProfile::smoothed, 0.2};
  CHECK(smooth(0.3) == 1.0);
  CHECK(smooth(0.4) == doctest::Approx(0.5));
  CHECK(smooth(0.5) == doctest::Approx(0.0));
  for (double x = -0.6; x <= 0.6; x += 0.01) {
    CHECK(smooth(x) >= 0.0);
    CHECK(smooth(x) <= 1.0);
  }
  CHECK(kind_of([] { SlitWindow{0.0, -1.0}.validate(); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { SlitWindow{0.0, 1.0, SlitProfile::smoothed, 0.7}.validate(); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("apply_slit") {
  const GridSpec g(256, 0.05);
  const auto joint = synthesize(paper_state(1.0, 2.0), g);

  SUBCASE("a window covering the box is the identity") {
    CHECK(l2_distance(apply_slit(joint, 1, slit(100.0)), joint) <= 1e-12);
  }
  SUBCASE("no conditioning effect without entanglement") {
    const auto prod = gaussian_product(g, 0.5, 0.8, 0.2, -0.3);
    const auto after = apply_slit(prod, 1, slit(0.3, 0.1));
    const Dispersion before = marginal_dispersion(prod, 2);
    const Dispersion cond = marginal_dispersion(after, 2);
    CHECK(std::abs(cond.var_q - before.var_q) <= 1e-10);
    CHECK(std::abs(cond.var_p - before.var_p) <= 1e-10);
    CHECK(std::abs(cond.mean_q - before.mean_q) <= 1e-10);
  }
  SUBCASE("a narrow slit on particle 1 localizes particle 2") {
    for (double w : {0.5, 0.25, 0.1}) {
      CAPTURE(w);
      const Dispersion cond = marginal_dispersion(apply_slit(joint, 1, slit(w)), 2);
      CHECK(cond.dq() < marginal_dispersion(joint, 2).dq());
    }
  }
  SUBCASE("errors") {
    CHECK(kind_of([&] { apply_slit(transform(joint), 1, slit(0.5)); }) == ErrorKind::WrongBasis);
    CHECK(kind_of([&] { apply_slit(joint, 1, slit(0.1, 40.0)); }) == ErrorKind::AnnihilatedState);
  }
}

TEST_CASE("conditional_particle2") {
  const GridSpec g(256, 0.05);
  SUBCASE("product state returns the particle-2 factor") {
    const auto psi = gaussian_1d(g, 0.5, 0.3);
    const auto phi = gaussian_1d(g, 0.8, -0.5, 0.7);
    const auto cond = conditional_particle2(product_state(psi, phi), slit(0.4, 0.2));
    CHECK(std::abs(std::abs(overlap(cond, phi)) - 1.0) <= 1e-10);
  }
  SUBCASE("full window on the paired state is symmetric with zero mean") {
    const auto cond = conditional_particle2(synthesize(paper_state(1.0, 1.0), g), slit(100.0));
    const Dispersion d = dispersion(cond);
    CHECK(std::abs(d.mean_q) < 1e-12);
    for (std::size_t j = 1; j < g.n(); ++j) CHECK(std::abs(std::abs(cond[j]) - std::abs(cond[g.n() - j])) < 1e-10);
  }
  SUBCASE("conditioned pure state obeys Heisenberg") {
    const auto cond = conditional_particle2(synthesize(paper_state(1.0, 2.0), g), slit(0.25));
    CHECK(dispersion(cond).product() >= 0.5 * (1 - 1e-6));
  }
  SUBCASE("a slit outside the support annihilates") {
    CHECK(kind_of([&] { conditional_particle2(synthesize(paper_state(1.0, 1.0), g), slit(0.1, 30.0)); }) ==
          ErrorKind::AnnihilatedState);
  }
}

TEST_CASE("popper_run: cases (a) and (b) are both reported") {
  const auto b = popper_run(1.0, 2.0, slit(0.2), std::nullopt, kPopperGrid);
  const auto a = popper_run(1.0, 2.0, slit(0.2), slit(0.2), kPopperGrid);
  CHECK(b.case_label == PopperCase::b);
  CHECK(a.case_label == PopperCase::a);
  CHECK_FALSE(b.slit_b.has_value());
  for (const auto* r : {&a, &b}) {
    CHECK(r->conditioned_dq2 > 0.0);
    CHECK(r->conditioned_dp2 > 0.0);
    CHECK(r->product == r->conditioned_dq2 * r->conditioned_dp2);
    CHECK(r->heisenberg_bound == 0.5);
    CHECK(r->satisfied);
    CHECK(r->projected_product >= 0.5 * (1 - 1e-6));
    CHECK(r->joint_report.general.satisfied);
  }
  // A physical slit on particle 2 narrows it further than the ghost image.
  CHECK(a.conditioned_dq2 < b.conditioned_dq2);
}

TEST_CASE("popper_run: case (b) sweep satisfies Heisenberg and narrows monotonically") {
  double previous = 1e300;
  for (double w : {0.5, 0.3, 0.2, 0.1}) {
    CAPTURE(w);
    const auto r = popper_run(1.0, 2.0, slit(w), std::nullopt, kPopperGrid);
    CHECK(r.product >= 0.5 * (1 - 1e-6));
    CHECK(r.projected_product >= 0.5 * (1 - 1e-6));
    CHECK(r.conditioned_dq2 < previous);
    CHECK(r.conditioned_dq2 < r.unconditioned.dq());
    previous = r.conditioned_dq2;
  }
}

TEST_CASE("popper_run: uncorrelated source is unaffected by slit A") {
  for (double w : {0.1, 0.4}) {
    const auto r = popper_run(1.0, 0.0, slit(w, 0.2), std::nullopt, kPopperGrid);
    CHECK(std::abs(r.conditioned_dq2 - r.unconditioned.dq()) <= 1e-8);
    CHECK(std::abs(r.projected_dq2 - r.unconditioned.dq()) <= 1e-8);
  }
}
