#include "entangle/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "entangle/error.hpp"
#include "entangle/oracle.hpp"

namespace entangle {

GaussianSum paper_state(double a, double k0, double hbar) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, fmt::format("a = {} must be > 0", a));
  if (!std::isfinite(k0)) throw Error(ErrorKind::InvalidArgument, "k0 must be finite");
  const double sigma = 1.0 / a;
  return GaussianSum({GaussianTerm{{1.0, 0.0}, +k0, sigma, -k0, sigma}, GaussianTerm{{1.0, 0.0}, -k0, sigma, +k0, sigma}},
                     hbar);
}

namespace {

bool close_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

}  // namespace

PaperComparison compare_with_paper(double a, double k0, const GridSpec& grid, double hbar) {
  if (k0 == 0.0) throw Error(ErrorKind::InvalidArgument, "k0 must be nonzero: the quoted approximations vanish at k0 = 0");
  const GaussianSum gsum = paper_state(a, k0, hbar);
  check_resolves(gsum, grid);

  PaperComparison pc;
  pc.a = a;
  pc.k0 = k0;
  pc.hbar = hbar;
  pc.computed = analytic_moment_set(gsum);
  const MomentSet& c = pc.computed;
  for (double mean : {c.mean_q1, c.mean_q2, c.mean_p1, c.mean_p2})
    if (std::abs(mean) > 1e-10)
      throw Error(ErrorKind::OracleDisagreement, fmt::format("first moment {:g} of a symmetric pair is not zero", mean));

  pc.quoted_x1x2 = k0 * k0 * a * a * a * a / 2.0;
  pc.quoted_p1p2 = -2.0 * hbar * hbar * k0 * k0;
  pc.ratio_x = c.m_q1q2 / pc.quoted_x1x2;
  pc.ratio_p = c.m_p1p2 / pc.quoted_p1p2;

  pc.oracle_x1x2 = oracle::quadrature_moment(gsum, 1, 1, Quadrature::position);
  pc.oracle_p1p2 = oracle::quadrature_moment(gsum, 1, 1, Quadrature::momentum);
  pc.oracle_agreement = close_rel(c.m_q1q2, pc.oracle_x1x2, 1e-8) && close_rel(c.m_p1p2, pc.oracle_p1p2, 1e-8);
  if (!pc.oracle_agreement)
    throw Error(ErrorKind::OracleDisagreement,
                fmt::format("analytic (<x1x2>, <p1p2>) = ({:.17g}, {:.17g}) vs quadrature ({:.17g}, {:.17g})",
                            c.m_q1q2, c.m_p1p2, pc.oracle_x1x2, pc.oracle_p1p2));

  const TwoParticleState state = synthesize(gsum, grid);
  pc.grid_x1x2 = moment(state, 1, 1, Quadrature::position);
  pc.grid_p1p2 = moment(state, 1, 1, Quadrature::momentum);
  return pc;
}

// ---------------------------------------------------------------------------
// Slits

std::string_view to_string(SlitProfile p) { return p == SlitProfile::rectangular ? "rectangular" : "smoothed"; }

void SlitWindow::validate() const {
  if (!(width > 0.0) || !std::isfinite(width))
    throw Error(ErrorKind::InvalidArgument, fmt::format("slit width {} must be positive", width));
  if (!std::isfinite(center)) throw Error(ErrorKind::InvalidArgument, "slit center must be finite");
  if (!(edge_fraction > 0.0 && edge_fraction <= 0.5))
    throw Error(ErrorKind::InvalidArgument, fmt::format("slit edge fraction {} must lie in (0, 0.5]", edge_fraction));
}

double SlitWindow::operator()(double x) const {
  const double half = 0.5 * width;
  const double r = std::abs(x - center);
  // Points exactly on the nominal edge count as inside despite rounding in x.
  if (r > half * (1.0 + 1e-12)) return 0.0;
  if (profile == SlitProfile::rectangular) return 1.0;
  const double taper = edge_fraction * width;
  const double plateau = half - taper;
  if (r <= plateau) return 1.0;
  const double t = std::min((r - plateau) / taper, 1.0);
  return 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

TwoParticleState apply_slit(const TwoParticleState& state, int particle, const SlitWindow& slit) {
  slit.validate();
  if (particle != 1 && particle != 2) throw Error(ErrorKind::InvalidArgument, "particle must be 1 or 2");
  if (state.basis() != Basis::position) throw Error(ErrorKind::WrongBasis, "slits act on position-basis states");
  const GridSpec& g = state.grid();
  const std::size_t n = g.n();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = slit(g.x(j));
  std::vector<cplx> out(state.amps().begin(), state.amps().end());
  double norm2 = 0.0;
  for (std::size_t j1 = 0; j1 < n; ++j1)
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      auto& v = out[j1 * n + j2];
      v *= particle == 1 ? w[j1] : w[j2];
      norm2 += std::norm(v);
    }
  norm2 *= state.weight();
  if (norm2 < 1e-12)
    throw Error(ErrorKind::AnnihilatedState, fmt::format("slit transmits only {:g} of the norm", norm2));
  return TwoParticleState::normalized(g, Basis::position, std::move(out), state.hbar());
}

SingleParticleState conditional_particle2(const TwoParticleState& state, const SlitWindow& slit) {
  slit.validate();
  if (state.basis() != Basis::position) throw Error(ErrorKind::WrongBasis, "slits act on position-basis states");
  const GridSpec& g = state.grid();
  const std::size_t n = g.n();
  std::vector<cplx> psi2(n);
  double window_norm2 = 0.0;
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    const double w = slit(g.x(j1));
    window_norm2 += w * w;
    if (w == 0.0) continue;
    for (std::size_t j2 = 0; j2 < n; ++j2) psi2[j2] += w * state(j1, j2);
  }
  double norm2 = 0.0;
  for (auto& v : psi2) {
    v *= g.dx();
    norm2 += std::norm(v);
  }
  norm2 *= g.dx();
  window_norm2 *= g.dx();
  // Cauchy-Schwarz: norm2 <= window_norm2 for a normalized joint state.
  if (!(window_norm2 > 0.0) || norm2 < 1e-12 * window_norm2)
    throw Error(ErrorKind::AnnihilatedState, fmt::format("slit projection leaves squared norm {:g}", norm2));
  return SingleParticleState::normalized(g, Basis::position, std::move(psi2), state.hbar());
}

PopperReport popper_run(double a, double k0, const SlitWindow& slit_a, const std::optional<SlitWindow>& slit_b,
                        const GridSpec& grid, double hbar) {
  slit_a.validate();
  if (slit_b) slit_b->validate();
  const TwoParticleState joint = synthesize(paper_state(a, k0, hbar), grid);

  PopperReport r;
  r.case_label = slit_b ? PopperCase::a : PopperCase::b;
  r.slit_a = slit_a;
  r.slit_b = slit_b;
  r.heisenberg_bound = hbar / 2.0;
  r.joint_report = evaluate_relations(moment_set(joint));
  r.unconditioned = marginal_dispersion(joint, 2);

  TwoParticleState selected = apply_slit(joint, 1, slit_a);
  if (slit_b) selected = apply_slit(selected, 2, *slit_b);
  const Dispersion cond = marginal_dispersion(selected, 2);
  r.conditioned_dq2 = cond.dq();
  r.conditioned_dp2 = cond.dp();
  r.product = r.conditioned_dq2 * r.conditioned_dp2;
  r.satisfied = r.product >= r.heisenberg_bound * (1.0 - 1e-9);

  const TwoParticleState before_projection = slit_b ? apply_slit(joint, 2, *slit_b) : joint;
  const Dispersion proj = dispersion(conditional_particle2(before_projection, slit_a));
  r.projected_dq2 = proj.dq();
  r.projected_dp2 = proj.dp();
  r.projected_product = proj.product();
  return r;
}

}  // namespace entangle
