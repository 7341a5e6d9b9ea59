#include "entangle/cli/check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "entangle/cli/report.hpp"
#include "entangle/error.hpp"
#include "entangle/operators.hpp"
#include "entangle/relations.hpp"
#include "entangle/sampling.hpp"
#include "entangle/scenarios.hpp"

namespace entangle::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double kRelTol = 1e-6;
constexpr double kSpectralTol = 1e-12;
constexpr double kResidualTol = 1e-12;
constexpr double kUnphysicalFloor = 1e-2;
constexpr double kSeparableTol = 1e-10;
constexpr int kCommutatorGrids = 8;

enum PropertyId : unsigned {
  kGeneral = 1,
  kHeisenberg = 2,
  kSpectral = 3,
  kCommutator = 4,
  kSeparable = 5,
};

std::mt19937_64 case_rng(std::uint64_t seed, unsigned property, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), property,
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

std::string describe(const GaussianSum& gs) {
  std::string s = fmt::format("hbar={:.17g} terms=[", gs.hbar());
  bool first = true;
  for (const auto& t : gs.terms()) {
    s += fmt::format("{}{{coeff=({:.17g},{:.17g}) mu1={:.17g} sigma1={:.17g} mu2={:.17g} sigma2={:.17g}}}",
                     first ? "" : ", ", t.coeff.real(), t.coeff.imag(), t.mu1, t.sigma1, t.mu2, t.sigma2);
    first = false;
  }
  return s + "]";
}

void record(PropertyOutcome& p, bool ok, const std::function<std::string()>& detail) {
  ++p.cases;
  if (ok) return;
  if (p.failures++ == 0) p.first_failure = detail();
}

}  // namespace

bool CheckResult::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed(); });
}

// worst: min of value/bound for the relations, max error for the spectral and
// commutator checks, max |cov| for separability.
CheckResult run_check(const CheckConfig& cfg, double hbar, const CheckHooks& hooks) {
  if (cfg.count < 1) throw Error(ErrorKind::InvalidArgument, "count must be at least 1");
  CheckResult res{cfg.seed, cfg.count, hbar, {}};
  PropertyOutcome general{"generalized_relation", 0, 0, std::numeric_limits<double>::infinity(), {}};
  PropertyOutcome heis{"heisenberg_per_particle", 0, 0, std::numeric_limits<double>::infinity(), {}};
  PropertyOutcome spectral{"parseval_round_trip", 0, 0, 0.0, {}};
  PropertyOutcome comm{"commutator_structure", 0, 0, 0.0, {}};
  PropertyOutcome sep{"qcf_separability", 0, 0, 0.0, {}};

  const GridSpec grid = default_sampling_grid();
  for (int i = 0; i < cfg.count; ++i) {
    auto rng = case_rng(cfg.seed, kGeneral, i);
    const GaussianSum gs = random_gaussian_sum(rng, {}, hbar);
    const auto where = [&] { return fmt::format("case {} (seed {}): {}", i, cfg.seed, describe(gs)); };
    try {
      const TwoParticleState st = symmetrize(synthesize(gs, grid), Parity::symmetric);
      MomentSet ms = moment_set(st);
      if (hooks.tamper) hooks.tamper(i, ms);
      const UncertaintyReport r = evaluate_relations(ms);
      const double g = r.general.value / (hbar * hbar);
      general.worst = std::min(general.worst, g);
      record(general, g >= 1 - kRelTol, [&] { return fmt::format("{} general/hbar^2={:.17g}", where(), g); });
      const double h = std::min(r.heis_1.value, r.heis_2.value) / (hbar / 2);
      heis.worst = std::min(heis.worst, h);
      record(heis, h >= 1 - kRelTol, [&] { return fmt::format("{} min(dQdP)/(hbar/2)={:.17g}", where(), h); });

      const TwoParticleState mom = transform(st);
      const double err = std::max(std::abs(mom.norm_squared() - 1.0), l2_distance(transform(mom), st));
      spectral.worst = std::max(spectral.worst, err);
      record(spectral, err <= kSpectralTol, [&] { return fmt::format("{} error={:.17g}", where(), err); });
    } catch (const Error& e) {
      record(general, false, [&] { return fmt::format("{} error: {}", where(), e.what()); });
    }
  }

  using E = OperatorExpr;
  for (int i = 0; i < std::min(cfg.count, kCommutatorGrids); ++i) {
    auto rng = case_rng(cfg.seed, kCommutator, i);
    const double dx = std::uniform_real_distribution<double>(0.3, 1.2)(rng);
    const GridSpec g(8, dx);
    const double physical = std::max(commutator_residual(E::qsum(), E::p21(), g, hbar).residual,
                                     commutator_residual(E::psum(), E::p21(), g, hbar).residual);
    const double unphysical = std::min(commutator_residual(E::q1(), E::p21(), g, hbar).residual,
                                       commutator_residual(E::p1(), E::p21(), g, hbar).residual);
    const auto conj = [&](const E& a, const E& b) {
      const ComplexMatrix ma = materialize(E::p21() * a * E::p21().adjoint(), g, hbar);
      const ComplexMatrix mb = materialize(b, g, hbar);
      return (ma - mb).norm() / std::max(mb.norm(), 1.0);
    };
    const double conj_err = std::max(conj(E::q1(), E::q2()), conj(E::p1(), E::p2()));
    const double err = std::max(physical, conj_err);
    comm.worst = std::max(comm.worst, err);
    record(comm, err <= kResidualTol && unphysical > kUnphysicalFloor, [&] {
      return fmt::format("case {} (seed {}): n=8 dx={:.17g} hbar={:.17g} physical={:.3g} conj={:.3g} unphysical={:.3g}",
                         i, cfg.seed, dx, hbar, physical, conj_err, unphysical);
    });
  }

  for (int i = 0; i < cfg.count; ++i) {
    auto rng = case_rng(cfg.seed, kSeparable, i);
    const GaussianSum gs = random_product_sum(rng, {}, hbar);
    const MomentSet ms = moment_set(synthesize(gs, grid));
    const double c = std::max(std::abs(ms.cov_q()), std::abs(ms.cov_p()));
    sep.worst = std::max(sep.worst, c);
    record(sep, c <= kSeparableTol, [&] {
      return fmt::format("case {} (seed {}): product {} |cov|={:.3g}", i, cfg.seed, describe(gs), c);
    });
  }
  // The paired family is entangled for every k0 a in [0.2, 3].
  for (int step = 1; step <= 15; ++step) {
    const double k0 = 0.2 * step;
    const MomentSet ms = analytic_moment_set(paper_state(1.0, k0, hbar));
    record(sep, std::abs(ms.cov_p()) >= 1e-4 * hbar * hbar * k0 * k0,
           [&] { return fmt::format("paired state a=1 k0={:.17g}: cov_p={:.3g}", k0, ms.cov_p()); });
  }

  res.properties = {general, heis, spectral, comm, sep};
  return res;
}

std::string render_check(const CheckResult& r, OutputFormat format, int precision) {
  const auto status = [](const PropertyOutcome& p) { return p.passed() ? "PASS" : "FAIL"; };
  if (format == OutputFormat::json) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = {{"seed", r.seed}, {"count", r.count}, {"hbar", round_to_digits(r.hbar, precision)}};
    j["properties"] = json::array();
    for (const auto& p : r.properties) {
      json pj = {{"name", p.name},
                 {"status", status(p)},
                 {"cases", p.cases},
                 {"failures", p.failures},
                 {"worst", round_to_digits(p.worst, precision)}};
      if (!p.passed()) pj["first_failure"] = p.first_failure;
      j["properties"].push_back(pj);
    }
    j["passed"] = r.passed();
    return j.dump(2) + "\n";
  }
  if (format == OutputFormat::csv) {
    std::string out = fmt::format("# schema_version: {}\nproperty,status,cases,failures,worst,first_failure\n",
                                  kSchemaVersion);
    for (const auto& p : r.properties)
      out += fmt::format("{},{},{},{},{},\"{}\"\n", p.name, status(p), p.cases, p.failures,
                         csv_number(p.worst, precision), p.first_failure);
    return out;
  }
  std::string out = fmt::format("schema_version: {}\ncheck seed={} count={} hbar={}\n", kSchemaVersion, r.seed,
                                r.count, table_number(r.hbar, precision));
  for (const auto& p : r.properties) {
    out += fmt::format("{} {:<26}cases={:<5} worst={}\n", status(p), p.name, p.cases,
                       table_number(p.worst, precision));
    if (!p.passed()) out += fmt::format("     {} failing; first: {}\n", p.failures, p.first_failure);
  }
  out += fmt::format("result: {}\n", r.passed() ? "PASS" : "FAIL");
  return out;
}

}  // namespace entangle::cli
