// Acceptance gate: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria (0 when all pass).
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "entangle/cli/app.hpp"
#include "entangle/observables.hpp"
#include "entangle/operators.hpp"
#include "entangle/oracle.hpp"
#include "entangle/relations.hpp"
#include "entangle/sampling.hpp"
#include "entangle/scenarios.hpp"

using namespace entangle;
using E = OperatorExpr;

namespace {

// Collects failed conditions; an empty list means the criterion passed.
struct Verdict {
  std::vector<std::string> failures;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  ///< 0 means no limit
  std::function<void(Verdict&)> body;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

const GridSpec kSmall(8, 0.7);
const GridSpec kPaperGrid(256, 0.08);

void physical_observables(Verdict& v) {
  const double qs = commutator_residual(E::qsum(), E::p21(), kSmall).residual;
  const double ps = commutator_residual(E::psum(), E::p21(), kSmall).residual;
  const double q1 = commutator_residual(E::q1(), E::p21(), kSmall).residual;
  const double p1 = commutator_residual(E::p1(), E::p21(), kSmall).residual;
  v.require(qs <= 1e-12, fmt::format("[Qsum,P21] = {:.3g}", qs));
  v.require(ps <= 1e-12, fmt::format("[Psum,P21] = {:.3g}", ps));
  v.require(q1 > 1e-2, fmt::format("[Q1,P21] = {:.3g}", q1));
  v.require(p1 > 1e-2, fmt::format("[P1,P21] = {:.3g}", p1));
  v.note = fmt::format("Qsum {:.1e}, Psum {:.1e}, Q1 {:.3f}, P1 {:.3f}", qs, ps, q1, p1);
}

void conjugation(Verdict& v) {
  const auto diff = [](const E& a, const E& b) {
    return (materialize(E::p21() * a * E::p21().adjoint(), kSmall) - materialize(b, kSmall)).norm();
  };
  const double dq = diff(E::q1(), E::q2());
  const double dp = diff(E::p1(), E::p2());
  v.require(dq <= 1e-12, fmt::format("P21 Q1 P21+ - Q2 = {:.3g}", dq));
  v.require(dp <= 1e-12, fmt::format("P21 P1 P21+ - P2 = {:.3g}", dp));
  v.note = fmt::format("Q {:.1e}, P {:.1e}", dq, dp);
}

void generalized_relation(Verdict& v) {
  std::mt19937_64 rng(20240607);
  const GridSpec g = default_sampling_grid();
  double worst = 1e300;
  for (int i = 0; i < 200; ++i) {
    const double hbar = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    const auto st = symmetrize(synthesize(random_gaussian_sum(rng, {}, hbar), g), Parity::symmetric);
    const MomentSet ms = moment_set(st);
    const double lhs = (ms.var_q1() + ms.var_q2() + 2 * ms.cov_q()) * (ms.var_p1() + ms.var_p2() + 2 * ms.cov_p());
    worst = std::min(worst, lhs / (hbar * hbar));
    v.require(lhs >= hbar * hbar * (1 - 1e-6), fmt::format("state {}: lhs/hbar^2 = {:.9g}", i, lhs / (hbar * hbar)));
  }
  v.note = fmt::format("200 states, min lhs/hbar^2 = {:.9f}", worst);
}

void zero_correlation(Verdict& v) {
  std::mt19937_64 rng(77);
  const GridSpec g = default_sampling_grid();
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const MomentSet ms = moment_set(synthesize(random_product_sum(rng), g));
    worst = std::max({worst, std::abs(ms.cov_q()), std::abs(ms.cov_p())});
  }
  v.require(worst <= 1e-10, fmt::format("max |cov| = {:.3g}", worst));
  const GaussianSum minimal({GaussianTerm{{1, 0}, 0.0, 0.9, 0.0, 0.9}}, 1.3);
  const auto r = evaluate_relations(moment_set(synthesize(minimal, kPaperGrid)));
  const double ratio = r.general.value / (1.3 * 1.3);
  v.require(std::abs(ratio - 1) <= 1e-6, fmt::format("minimum-uncertainty lhs/hbar^2 = {:.12g}", ratio));
  v.note = fmt::format("50 products max |cov| {:.1e}; saturation {:.12f}", worst, ratio);
}

void first_moments(Verdict& v) {
  const MomentSet ms = analytic_moment_set(paper_state(1.0, 1.0));
  for (double m : {ms.mean_q1, ms.mean_q2, ms.mean_p1, ms.mean_p2})
    v.require(std::abs(m) <= 1e-12, fmt::format("mean = {:.3g}", m));
  v.note = fmt::format("means {} {} {} {}", ms.mean_q1, ms.mean_q2, ms.mean_p1, ms.mean_p2);
}

void triple_oracle(Verdict& v) {
  double worst = 0.0;
  for (double k0 : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const GaussianSum gs = paper_state(1.0, k0);
    const MomentSet an = analytic_moment_set(gs);
    const MomentSet gr = moment_set(synthesize(gs, GridSpec(256, 0.08)));
    const double qx = oracle::quadrature_moment(gs, 1, 1, Quadrature::position);
    const double qp = oracle::quadrature_moment(gs, 1, 1, Quadrature::momentum);
    for (const auto& [name, a, q, g] : {std::tuple{"x1x2", an.m_q1q2, qx, gr.m_q1q2},
                                        std::tuple{"p1p2", an.m_p1p2, qp, gr.m_p1p2}}) {
      const double d = std::max({rel(a, q), rel(a, g), rel(q, g)});
      worst = std::max(worst, d);
      v.require(d <= 1e-6, fmt::format("k0 = {}: {} pairwise rel = {:.3g}", k0, name, d));
    }
  }
  v.note = fmt::format("max pairwise rel = {:.2e}", worst);
}

void sign_structure(Verdict& v) {
  std::string ratios;
  for (double k0 : {0.05, 0.1, 0.5, 1.0, 2.0, 3.0}) {
    const PaperComparison pc = compare_with_paper(1.0, k0, kPaperGrid);
    v.require(pc.computed.m_q1q2 > 0, fmt::format("k0 = {}: <x1x2> = {:.3g}", k0, pc.computed.m_q1q2));
    v.require(pc.computed.m_p1p2 < 0, fmt::format("k0 = {}: <p1p2> = {:.3g}", k0, pc.computed.m_p1p2));
    v.require(std::isfinite(pc.ratio_x) && std::isfinite(pc.ratio_p), fmt::format("k0 = {}: ratio not finite", k0));
    v.require(std::isfinite(pc.oracle_x1x2) && std::isfinite(pc.oracle_p1p2) && pc.oracle_agreement,
              fmt::format("k0 = {}: oracle values missing", k0));
    if (k0 == 0.05 || k0 == 3.0) ratios += fmt::format(" k0={}: ratio_x {:.4f} ratio_p {:.4f};", k0, pc.ratio_x, pc.ratio_p);
  }
  v.note = "signs ok;" + ratios;
}

void separability(Verdict& v) {
  std::mt19937_64 rng(4242);
  const GridSpec g = default_sampling_grid();
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const GaussianSum single({random_term(rng, {})});
    const MomentSet ms = moment_set(synthesize(single, g));
    worst = std::max({worst, std::abs(ms.cov_q()), std::abs(ms.cov_p())});
  }
  v.require(worst <= 1e-10, fmt::format("single-term max |cov| = {:.3g}", worst));
  double min_ratio = 1e300;
  for (int step = 0; step <= 28; ++step) {
    const double k0 = 0.2 + 0.1 * step;
    const MomentSet ms = moment_set(synthesize(paper_state(1.0, k0), kPaperGrid));
    min_ratio = std::min(min_ratio, std::abs(ms.cov_p()) / (k0 * k0));
    v.require(std::abs(ms.cov_p()) >= 1e-4 * k0 * k0, fmt::format("k0 = {}: |cov_p| = {:.3g}", k0, ms.cov_p()));
  }
  v.note = fmt::format("single-term max |cov| {:.1e}; paired min |cov_p|/k0^2 {:.3f}", worst, min_ratio);
}

void conditioned_heisenberg(Verdict& v) {
  const GridSpec g(512, 0.02);
  std::string products;
  for (double w : {0.1, 0.2, 0.5}) {
    const PopperReport r = popper_run(1.0, 2.0, SlitWindow{0.0, w}, std::nullopt, g);
    v.require(r.projected_product >= 0.5 * (1 - 1e-6),
              fmt::format("width {}: projected dQ2 dP2 = {:.9g}", w, r.projected_product));
    v.require(r.product >= 0.5 * (1 - 1e-6), fmt::format("width {}: post-selected dQ2 dP2 = {:.9g}", w, r.product));
    products += fmt::format(" {}:{:.4f}", w, r.projected_product);
  }
  double previous = 1e300;
  std::string dq;
  for (double w : {0.5, 0.3, 0.2, 0.1}) {
    const PopperReport r = popper_run(1.0, 2.0, SlitWindow{0.0, w}, std::nullopt, g);
    v.require(r.conditioned_dq2 < previous, fmt::format("width {}: dQ2 = {:.9g} not below wider slit", w, r.conditioned_dq2));
    previous = r.conditioned_dq2;
    dq += fmt::format(" {}:{:.4f}", w, r.conditioned_dq2);
  }
  v.note = "products" + products + "; dQ2" + dq;
}

void determinism(Verdict& v) {
  const auto run_check = [] {
    std::string a0 = "entuncert", a1 = "check", a2 = "--seed", a3 = "1234", a4 = "--count", a5 = "20";
    char* argv[] = {a0.data(), a1.data(), a2.data(), a3.data(), a4.data(), a5.data()};
    std::ostringstream out, err;
    const int code = cli::run(6, argv, out, err);
    return std::pair{code, out.str()};
  };
  const auto [c1, o1] = run_check();
  const auto [c2, o2] = run_check();
  v.require(c1 == 0 && c2 == 0, fmt::format("check exit codes {} {}", c1, c2));
  v.require(o1 == o2 && !o1.empty(), "check output differs between runs");

  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  const GridSpec g(128, 0.1);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<cplx> amps(g.n() * g.n());
    for (auto& a : amps) a = {normal(rng), normal(rng)};
    const auto st = TwoParticleState::normalized(g, Basis::position, std::move(amps));
    const auto mom = transform(st);
    worst = std::max({worst, std::abs(mom.norm_squared() - 1.0), l2_distance(transform(mom), st)});
  }
  v.require(worst <= 1e-12, fmt::format("Parseval / round trip error {:.3g}", worst));
  v.note = fmt::format("check output identical ({} bytes); max spectral error {:.1e}", o1.size(), worst);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "extended operators commute with exchange", 1.0, physical_observables},
      {2, "exchange conjugation relabels particles", 1.0, conjugation},
      {3, "generalized relation on 200 symmetrized states", 60.0, generalized_relation},
      {4, "zero-correlation reduction and saturation", 0.0, zero_correlation},
      {5, "paired state has zero first moments", 0.0, first_moments},
      {6, "analytic, quadrature and grid moments agree", 30.0, triple_oracle},
      {7, "paired-state covariance signs and recorded ratios", 0.0, sign_structure},
      {8, "covariance vanishes iff separable", 0.0, separability},
      {9, "conditioned particle-2 states obey Heisenberg", 30.0, conditioned_heisenberg},
      {10, "deterministic check output and unitary transform", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s)
      v.failures.push_back(fmt::format("runtime {:.2f} s exceeds {} s", secs, c.time_limit_s));
    const bool ok = v.failures.empty();
    failed += ok ? 0 : 1;
    std::cout << fmt::format("{} criterion {:>2}: {} ({:.2f} s) {}\n", ok ? "PASS" : "FAIL", c.id, c.title, secs,
                             ok ? v.note : v.failures.front());
    for (std::size_t i = 1; i < v.failures.size() && i < 5; ++i) std::cout << "      " << v.failures[i] << "\n";
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
                           criteria.size());
  return failed;
}
