#include <doctest.h>

#include <random>

#include "entangle/error.hpp"
#include "entangle/relations.hpp"
#include "entangle/sampling.hpp"
#include "entangle/scenarios.hpp"
#include "test_support.hpp"

using namespace entangle;
using entangle::testing::gaussian_product;
using entangle::testing::rel_diff;

namespace {

void check_slack(const BoundCheck& b) { CHECK(b.slack == b.value - b.bound); }

// psi ∝ exp(-(x1 + x2)^2 / (4 sp^2) - (x1 - x2)^2 / (4 sm^2)). With S = x1 + x2
// and D = x1 - x2 independent Gaussians:
//   var x = (sp^2 + sm^2) / 4,  cov_q = (sp^2 - sm^2) / 4,
//   var p = 1/(4 sp^2) + 1/(4 sm^2),  cov_p = 1/(4 sp^2) - 1/(4 sm^2),
// so the extended factors are sp^2 and 1/sp^2 and the product is exactly 1.
TwoParticleState squeezed_pair(const GridSpec& g, double sp, double sm) {
  const std::size_t n = g.n();
  std::vector<cplx> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double s = g.x(i) + g.x(j);
      const double d = g.x(i) - g.x(j);
      a[i * n + j] = std::exp(-s * s / (4 * sp * sp) - d * d / (4 * sm * sm));
    }
  return TwoParticleState::normalized(g, Basis::position, std::move(a));
}

GaussianSum rescaled(const GaussianSum& gs, double lambda) {
  std::vector<GaussianTerm> terms(gs.terms().begin(), gs.terms().end());
  for (auto& t : terms) {
    t.mu1 /= lambda;
    t.mu2 /= lambda;
    t.sigma1 /= lambda;
    t.sigma2 /= lambda;
  }
  return GaussianSum(terms, gs.hbar());
}

}  // namespace

TEST_CASE("minimum-uncertainty product saturates every relation") {
  const double s = 0.75;
  const auto r = evaluate_relations(moment_set(gaussian_product(GridSpec(256, 0.08), s, s)));
  CHECK(r.heis_1.value == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.heis_2.value == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.general.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.general.bound == 1.0);
  CHECK(r.general.satisfied);
  CHECK(std::abs(r.general.slack) < 1e-8);
  REQUIRE(r.symmetric_form.has_value());
  CHECK(r.symmetric_form->applicable);
  CHECK(r.symmetric_form->value == doctest::Approx(0.25).epsilon(1e-8));
  check_slack(r.heis_1);
  check_slack(r.general);
  check_slack(*r.symmetric_form);
}

TEST_CASE("paired state: relation holds and differs from the uncorrelated product") {
  const MomentSet ms = moment_set(synthesize(paper_state(1.0, 1.0), GridSpec(256, 0.08)));
  const auto r = evaluate_relations(ms);
  CHECK(r.general.satisfied);
  CHECK(std::abs(ms.cov_q()) > 1e-3);
  CHECK(std::abs(ms.cov_p()) > 1e-3);
  const double naive = (2 * ms.var_q2()) * (2 * ms.var_p2());
  CHECK(std::abs(r.general.value - naive) > 1e-3);
  REQUIRE(r.symmetric_form.has_value());  // symmetric state: dQ1 = dQ2
  CHECK(r.symmetric_form->satisfied);
}

TEST_CASE("squeezed pair: near-zero position factor with a large momentum partner") {
  const double sp = 0.1, sm = 1.0;
  const MomentSet ms = moment_set(squeezed_pair(GridSpec(256, 0.05), sp, sm));
  CHECK(rel_diff(ms.var_q1(), (sp * sp + sm * sm) / 4) < 1e-8);
  CHECK(rel_diff(ms.cov_q(), (sp * sp - sm * sm) / 4) < 1e-8);
  CHECK(rel_diff(ms.cov_p(), 1 / (4 * sp * sp) - 1 / (4 * sm * sm)) < 1e-8);
  const auto r = evaluate_relations(ms);
  CHECK(rel_diff(r.q_factor, sp * sp) < 1e-6);
  CHECK(rel_diff(r.p_factor, 1 / (sp * sp)) < 1e-6);
  CHECK(r.general.value >= 1.0 - 1e-6);
  CHECK(r.general.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("symmetric form is gated on equal position dispersions") {
  const GridSpec g(256, 0.08);
  const auto r = evaluate_relations(moment_set(gaussian_product(g, 0.6, 0.9)));
  CHECK_FALSE(r.symmetric_form.has_value());
  CHECK(r.position_mismatch == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK(evaluate_relations(moment_set(gaussian_product(g, 0.6, 0.9)), 0.5).symmetric_form.has_value());
}

TEST_CASE("zero-correlation reduction") {
  std::mt19937_64 rng(99);
  const GridSpec g = default_sampling_grid();
  for (int i = 0; i < 10; ++i) {
    const MomentSet ms = moment_set(synthesize(random_product_sum(rng), g));
    const auto r = evaluate_relations(ms, 1.0);
    CHECK(rel_diff(r.general.value, (ms.var_q1() + ms.var_q2()) * (ms.var_p1() + ms.var_p2())) < 1e-9);
    REQUIRE(r.symmetric_form.has_value());
    CHECK(rel_diff(r.symmetric_form->value, ms.var_q2() * (ms.var_p1() + ms.var_p2()) / 2) < 1e-9);
  }
}

TEST_CASE("negative variance factor signals corrupted moments") {
  MomentSet ms;
  ms.m_q1q1 = ms.m_q2q2 = 1.0;
  ms.m_q1q2 = -1.5;  // |cov| > var: impossible for a real state
  ms.m_p1p1 = ms.m_p2p2 = 1.0;
  try {
    evaluate_relations(ms);
    FAIL("expected NegativeVarianceFactor");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeVarianceFactor);
  }
}

TEST_CASE("property: extended and per-particle relations hold on random symmetrized states") {
  std::mt19937_64 rng(31337);
  const GridSpec g = default_sampling_grid();
  for (int i = 0; i < 40; ++i) {
    const double hbar = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    const auto st = symmetrize(synthesize(random_gaussian_sum(rng, {}, hbar), g), Parity::symmetric);
    const auto r = evaluate_relations(moment_set(st));
    CHECK(r.general.value >= hbar * hbar * (1 - 1e-6));
    CHECK(r.heis_1.value >= hbar / 2 * (1 - 1e-6));
    CHECK(r.heis_2.value >= hbar / 2 * (1 - 1e-6));
    CHECK(r.general.satisfied);
  }
}

TEST_CASE("property: rescaling lengths leaves the extended product unchanged") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5; ++i) {
    const GaussianSum gs = random_gaussian_sum(rng);
    const double lambda = std::uniform_real_distribution<double>(0.6, 1.8)(rng);
    const auto base = evaluate_relations(moment_set(synthesize(gs, GridSpec(256, 0.1))));
    const auto scaled = evaluate_relations(moment_set(synthesize(rescaled(gs, lambda), GridSpec(256, 0.1 * lambda))));
    CHECK(rel_diff(scaled.general.value, base.general.value) <= 1e-8);
  }
}
