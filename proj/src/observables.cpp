#include "entangle/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "entangle/error.hpp"
#include "entangle/operators.hpp"

namespace entangle {

bool MomentSet::invariants_hold() const {
  constexpr double var_floor = -1e-12;
  constexpr double cs_slack = 1e-9;
  if (var_q1() < var_floor || var_q2() < var_floor || var_p1() < var_floor || var_p2() < var_floor) return false;
  const auto bound = [](double a, double b) { return std::sqrt(std::max(a, 0.0) * std::max(b, 0.0)); };
  return std::abs(cov_q()) <= bound(var_q1(), var_q2()) + cs_slack &&
         std::abs(cov_p()) <= bound(var_p1(), var_p2()) + cs_slack;
}

// ---------------------------------------------------------------------------
// Grid quadrature

namespace {

std::vector<double> powers(const std::vector<double>& c, int e) {
  std::vector<double> out(c.size(), 1.0);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int p = 0; p < e; ++p) out[i] *= c[i];
  return out;
}

// Sum over the grid of c1^e1 c2^e2 |amp|^2 w for a state already in the basis
// whose coordinates are `coords`.
double diagonal_moment(const TwoParticleState& s, const std::vector<double>& coords, int e1, int e2) {
  const std::size_t n = s.grid().n();
  const auto w1 = powers(coords, e1);
  const auto w2 = powers(coords, e2);
  const auto a = s.amps();
  double total = 0.0;
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    double row = 0.0;
    for (std::size_t j2 = 0; j2 < n; ++j2) row += w2[j2] * std::norm(a[j1 * n + j2]);
    total += w1[j1] * row;
  }
  return total * s.weight();
}

std::vector<double> coordinates(const TwoParticleState& s) {
  if (s.basis() == Basis::position) return s.grid().positions();
  auto k = s.grid().wavenumbers();
  for (auto& v : k) v *= s.hbar();
  return k;
}

void check_order(int e1, int e2) {
  if (e1 < 0 || e2 < 0) throw Error(ErrorKind::InvalidArgument, "moment exponents must be non-negative");
  if (e1 + e2 > 4) throw Error(ErrorKind::UnsupportedOrder, fmt::format("moment order {} exceeds 4", e1 + e2));
}

}  // namespace

double moment(const TwoParticleState& state, int e1, int e2, Quadrature which) {
  check_order(e1, e2);
  const Basis wanted = which == Quadrature::position ? Basis::position : Basis::momentum;
  const TwoParticleState s = to_basis(state, wanted);
  return diagonal_moment(s, coordinates(s), e1, e2);
}

MomentSet moment_set(const TwoParticleState& state) {
  const TwoParticleState pos = to_basis(state, Basis::position);
  const TwoParticleState mom = to_basis(state, Basis::momentum);
  MomentSet ms;
  ms.hbar = state.hbar();
  ms.mean_q1 = moment(pos, 1, 0, Quadrature::position);
  ms.mean_q2 = moment(pos, 0, 1, Quadrature::position);
  ms.m_q1q1 = moment(pos, 2, 0, Quadrature::position);
  ms.m_q2q2 = moment(pos, 0, 2, Quadrature::position);
  ms.m_q1q2 = moment(pos, 1, 1, Quadrature::position);
  ms.mean_p1 = moment(mom, 1, 0, Quadrature::momentum);
  ms.mean_p2 = moment(mom, 0, 1, Quadrature::momentum);
  ms.m_p1p1 = moment(mom, 2, 0, Quadrature::momentum);
  ms.m_p2p2 = moment(mom, 0, 2, Quadrature::momentum);
  ms.m_p1p2 = moment(mom, 1, 1, Quadrature::momentum);
  return ms;
}

// ---------------------------------------------------------------------------
// Closed-form Gaussian moments
//
// For terms t, s the per-axis integrands are
//   momentum:  g_t(k) g_s(k)                 (real Gaussian)
//   position:  conj(h_t(x)) h_s(x), h = sqrt(2) sigma exp(i mu x - sigma^2 x^2)
// Both have zeroth moment 2 sigma_t sigma_s sqrt(pi / (sigma_t^2 + sigma_s^2))
// times the overlap factor exp(-(mu_t - mu_s)^2 / (4 (sigma_t^2 + sigma_s^2))).

namespace {

using AxisMoments = std::array<cplx, 3>;  // zeroth, first, second

double overlap_weight(double mu_t, double sig_t, double mu_s, double sig_s) {
  const double s2 = sig_t * sig_t + sig_s * sig_s;
  const double d = mu_t - mu_s;
  return 2.0 * sig_t * sig_s * std::sqrt(std::numbers::pi / s2) * std::exp(-d * d / (4.0 * s2));
}

AxisMoments momentum_axis(double mu_t, double sig_t, double mu_s, double sig_s) {
  const double st2 = sig_t * sig_t;
  const double ss2 = sig_s * sig_s;
  const double i0 = overlap_weight(mu_t, sig_t, mu_s, sig_s);
  const double mean = (mu_t * ss2 + mu_s * st2) / (st2 + ss2);
  const double var = 2.0 * st2 * ss2 / (st2 + ss2);
  return {cplx{i0}, cplx{i0 * mean}, cplx{i0 * (mean * mean + var)}};
}

AxisMoments position_axis(double mu_t, double sig_t, double mu_s, double sig_s) {
  const double a = sig_t * sig_t + sig_s * sig_s;
  const double i0 = overlap_weight(mu_t, sig_t, mu_s, sig_s);
  // Completing the square in exp(-a x^2 + i (mu_s - mu_t) x) puts the
  // center at i (mu_s - mu_t) / (2a).
  const cplx center{0.0, (mu_s - mu_t) / (2.0 * a)};
  return {cplx{i0}, i0 * center, i0 * (center * center + 1.0 / (2.0 * a))};
}

struct PairTable {
  // Accumulated sum_{t,s} conj(c_t) c_s J1[e1] J2[e2] for e1 + e2 <= 2.
  cplx m[3][3]{};
};

template <class AxisFn>
PairTable accumulate(const GaussianSum& gsum, AxisFn axis) {
  PairTable tab;
  const auto terms = gsum.terms();
  for (const auto& t : terms)
    for (const auto& s : terms) {
      const cplx c = std::conj(t.coeff) * s.coeff;
      const AxisMoments a1 = axis(t.mu1, t.sigma1, s.mu1, s.sigma1);
      const AxisMoments a2 = axis(t.mu2, t.sigma2, s.mu2, s.sigma2);
      for (int e1 = 0; e1 <= 2; ++e1)
        for (int e2 = 0; e1 + e2 <= 2; ++e2) tab.m[e1][e2] += c * a1[e1] * a2[e2];
    }
  return tab;
}

}  // namespace

MomentSet analytic_moment_set(const GaussianSum& gsum) {
  const PairTable mom = accumulate(gsum, momentum_axis);
  const PairTable pos = accumulate(gsum, position_axis);
  const double norm_k = mom.m[0][0].real();
  const double norm_x = pos.m[0][0].real();
  if (!(norm_k > 0.0) || !(norm_x > 0.0))
    throw Error(ErrorKind::NormUnderflow, "GaussianSum has vanishing squared norm");
  const double h = gsum.hbar();
  const auto q = [&](int e1, int e2) { return pos.m[e1][e2].real() / norm_x; };
  const auto p = [&](int e1, int e2) { return mom.m[e1][e2].real() / norm_k * std::pow(h, e1 + e2); };

  MomentSet ms;
  ms.hbar = h;
  ms.mean_q1 = q(1, 0);
  ms.mean_q2 = q(0, 1);
  ms.m_q1q1 = q(2, 0);
  ms.m_q2q2 = q(0, 2);
  ms.m_q1q2 = q(1, 1);
  ms.mean_p1 = p(1, 0);
  ms.mean_p2 = p(0, 1);
  ms.m_p1p1 = p(2, 0);
  ms.m_p2p2 = p(0, 2);
  ms.m_p1p2 = p(1, 1);
  return ms;
}

// ---------------------------------------------------------------------------
// One-particle dispersions

double Dispersion::dq() const { return std::sqrt(std::max(var_q, 0.0)); }
double Dispersion::dp() const { return std::sqrt(std::max(var_p, 0.0)); }

Dispersion dispersion(const SingleParticleState& state) {
  const SingleParticleState pos = to_basis(state, Basis::position);
  const SingleParticleState mom = to_basis(state, Basis::momentum);
  const GridSpec& g = state.grid();
  double sx = 0, sxx = 0, sk = 0, skk = 0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double px = std::norm(pos[j]);
    const double pk = std::norm(mom[j]);
    sx += g.x(j) * px;
    sxx += g.x(j) * g.x(j) * px;
    sk += g.k(j) * pk;
    skk += g.k(j) * g.k(j) * pk;
  }
  Dispersion d;
  d.hbar = state.hbar();
  d.mean_q = sx * pos.weight();
  d.var_q = sxx * pos.weight() - d.mean_q * d.mean_q;
  const double h = state.hbar();
  d.mean_p = h * sk * mom.weight();
  d.var_p = h * h * skk * mom.weight() - d.mean_p * d.mean_p;
  return d;
}

Dispersion marginal_dispersion(const TwoParticleState& state, int particle) {
  if (particle != 1 && particle != 2) throw Error(ErrorKind::InvalidArgument, "particle must be 1 or 2");
  const int e1 = particle == 1 ? 1 : 0;
  const int e2 = 1 - e1;
  const TwoParticleState pos = to_basis(state, Basis::position);
  const TwoParticleState mom = to_basis(state, Basis::momentum);
  Dispersion d;
  d.hbar = state.hbar();
  d.mean_q = moment(pos, e1, e2, Quadrature::position);
  d.var_q = moment(pos, 2 * e1, 2 * e2, Quadrature::position) - d.mean_q * d.mean_q;
  d.mean_p = moment(mom, e1, e2, Quadrature::momentum);
  d.var_p = moment(mom, 2 * e1, 2 * e2, Quadrature::momentum) - d.mean_p * d.mean_p;
  return d;
}

// ---------------------------------------------------------------------------
// Commutator expectation

namespace {

double edge_ratio(const TwoParticleState& s) {
  const std::size_t n = s.grid().n();
  double peak = 0.0;
  double edge = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double v = std::abs(s(a, b));
      peak = std::max(peak, v);
      if (a == 0 || b == 0 || a == n - 1 || b == n - 1) edge = std::max(edge, v);
    }
  return peak > 0.0 ? edge / peak : 0.0;
}

}  // namespace

cplx expectation_of_commutator_qp(const TwoParticleState& state, CommutatorTarget which) {
  constexpr double leak_tol = 1e-12;
  const TwoParticleState pos = to_basis(state, Basis::position);
  const TwoParticleState mom = to_basis(state, Basis::momentum);
  const double leak = std::max(edge_ratio(pos), edge_ratio(mom));
  if (leak > leak_tol)
    throw Error(ErrorKind::BoundaryLeak,
                fmt::format("edge amplitude is {:.3g} of the peak (limit {:g})", leak, leak_tol));

  OperatorExpr q = OperatorExpr::qsum();
  OperatorExpr p = OperatorExpr::psum();
  if (which == CommutatorTarget::particle1) {
    q = OperatorExpr::q1();
    p = OperatorExpr::p1();
  } else if (which == CommutatorTarget::particle2) {
    q = OperatorExpr::q2();
    p = OperatorExpr::p2();
  }
  return expectation(q * p, pos) - expectation(p * q, pos);
}

}  // namespace entangle
