#include "entangle/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "entangle/error.hpp"
#include "entangle/spectral.hpp"

namespace entangle {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NormUnderflow: return "NormUnderflow";
    case ErrorKind::AnnihilatedState: return "AnnihilatedState";
    case ErrorKind::WrongBasis: return "WrongBasis";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::BoundaryLeak: return "BoundaryLeak";
    case ErrorKind::NegativeVarianceFactor: return "NegativeVarianceFactor";
    case ErrorKind::OracleDisagreement: return "OracleDisagreement";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Basis opposite(Basis b) { return b == Basis::position ? Basis::momentum : Basis::position; }

// ---------------------------------------------------------------------------
// GridSpec

GridSpec::GridSpec(std::size_t n, double dx, double x0) : n_(n), dx_(dx), x0_(x0) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw Error(ErrorKind::InvalidArgument, fmt::format("grid n = {} must be a power of two >= 8", n));
  if (!(dx > 0.0) || !std::isfinite(dx))
    throw Error(ErrorKind::InvalidArgument, fmt::format("grid dx = {} must be finite and positive", dx));
  if (!std::isfinite(x0) || !std::isfinite(length()))
    throw Error(ErrorKind::InvalidArgument, "grid center and box length must be finite");
}

double GridSpec::dk() const { return 2.0 * std::numbers::pi / length(); }

std::vector<double> GridSpec::positions() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
  return out;
}

std::vector<double> GridSpec::wavenumbers() const {
  std::vector<double> out(n_);
  for (std::size_t m = 0; m < n_; ++m) out[m] = k(m);
  return out;
}

// ---------------------------------------------------------------------------
// States

namespace {

double sample_weight(const GridSpec& g, Basis b) {
  return b == Basis::position ? g.dx() : g.dk();
}

double sum_abs2(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return s;
}

void require_finite(std::span<const cplx> a) {
  for (const auto& v : a)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::InvalidArgument, "amplitudes must be finite");
}

void require_hbar(double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw Error(ErrorKind::InvalidArgument, fmt::format("hbar = {} must be finite and positive", hbar));
}

std::vector<cplx> rescaled(std::vector<cplx> amps, double norm2) {
  if (!(norm2 >= 1e-300)) throw Error(ErrorKind::NormUnderflow, fmt::format("squared norm {:g} < 1e-300", norm2));
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& v : amps) v *= s;
  return amps;
}

}  // namespace

TwoParticleState::TwoParticleState(const GridSpec& grid, Basis basis, std::vector<cplx> amps, double hbar)
    : grid_(grid), basis_(basis), hbar_(hbar), amps_(std::move(amps)) {}

TwoParticleState TwoParticleState::normalized(const GridSpec& grid, Basis basis, std::vector<cplx> amps,
                                              double hbar) {
  require_hbar(hbar);
  if (amps.size() != grid.n() * grid.n())
    throw Error(ErrorKind::InvalidArgument, "two-particle amplitude array must have n*n entries");
  require_finite(amps);
  const double w = sample_weight(grid, basis);
  const double norm2 = sum_abs2(amps) * w * w;
  return TwoParticleState(grid, basis, rescaled(std::move(amps), norm2), hbar);
}

TwoParticleState TwoParticleState::from_normalized(const GridSpec& grid, Basis basis, std::vector<cplx> amps,
                                                   double hbar) {
  require_hbar(hbar);
  if (amps.size() != grid.n() * grid.n())
    throw Error(ErrorKind::InvalidArgument, "two-particle amplitude array must have n*n entries");
  require_finite(amps);
  TwoParticleState s(grid, basis, std::move(amps), hbar);
  if (std::abs(s.norm_squared() - 1.0) > 1e-10)
    throw Error(ErrorKind::InvalidArgument, fmt::format("state norm^2 = {:.17g} is not 1", s.norm_squared()));
  return s;
}

double TwoParticleState::weight() const {
  const double w = sample_weight(grid_, basis_);
  return w * w;
}

double TwoParticleState::norm_squared() const { return sum_abs2(amps_) * weight(); }

SingleParticleState::SingleParticleState(const GridSpec& grid, Basis basis, std::vector<cplx> amps, double hbar)
    : grid_(grid), basis_(basis), hbar_(hbar), amps_(std::move(amps)) {}

SingleParticleState SingleParticleState::normalized(const GridSpec& grid, Basis basis, std::vector<cplx> amps,
                                                    double hbar) {
  require_hbar(hbar);
  if (amps.size() != grid.n())
    throw Error(ErrorKind::InvalidArgument, "single-particle amplitude array must have n entries");
  require_finite(amps);
  const double norm2 = sum_abs2(amps) * sample_weight(grid, basis);
  return SingleParticleState(grid, basis, rescaled(std::move(amps), norm2), hbar);
}

double SingleParticleState::weight() const { return sample_weight(grid_, basis_); }

double SingleParticleState::norm_squared() const { return sum_abs2(amps_) * weight(); }

// ---------------------------------------------------------------------------
// GaussianSum

GaussianSum::GaussianSum(std::vector<GaussianTerm> terms, double hbar) : terms_(std::move(terms)), hbar_(hbar) {
  require_hbar(hbar);
  if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "GaussianSum needs at least one term");
  bool any_nonzero = false;
  for (const auto& t : terms_) {
    if (!(t.sigma1 > 0.0) || !(t.sigma2 > 0.0) || !std::isfinite(t.sigma1) || !std::isfinite(t.sigma2))
      throw Error(ErrorKind::InvalidArgument, "Gaussian term widths must be finite and positive");
    if (!std::isfinite(t.mu1) || !std::isfinite(t.mu2) || !std::isfinite(t.coeff.real()) ||
        !std::isfinite(t.coeff.imag()))
      throw Error(ErrorKind::InvalidArgument, "Gaussian term parameters must be finite");
    any_nonzero = any_nonzero || t.coeff != cplx{};
  }
  if (!any_nonzero) throw Error(ErrorKind::InvalidArgument, "GaussianSum has only zero coefficients");
}

cplx GaussianSum::momentum_amplitude(double k1, double k2) const {
  cplx f{};
  for (const auto& t : terms_) {
    const double d1 = k1 - t.mu1;
    const double d2 = k2 - t.mu2;
    f += t.coeff * std::exp(-d1 * d1 / (4.0 * t.sigma1 * t.sigma1) - d2 * d2 / (4.0 * t.sigma2 * t.sigma2));
  }
  return f;
}

cplx GaussianSum::position_amplitude(double x1, double x2) const {
  cplx psi{};
  for (const auto& t : terms_) {
    const double env = 2.0 * t.sigma1 * t.sigma2 *
                       std::exp(-t.sigma1 * t.sigma1 * x1 * x1 - t.sigma2 * t.sigma2 * x2 * x2);
    psi += t.coeff * env * std::polar(1.0, t.mu1 * x1 + t.mu2 * x2);
  }
  return psi;
}

// ---------------------------------------------------------------------------
// Operations

void check_resolves(const GaussianSum& gsum, const GridSpec& grid) {
  constexpr double margin = 6.0;
  const double kmax = grid.k_max();
  for (std::size_t i = 0; i < gsum.terms().size(); ++i) {
    const auto& t = gsum.terms()[i];
    for (auto [mu, sigma] : {std::pair{t.mu1, t.sigma1}, std::pair{t.mu2, t.sigma2}}) {
      if (std::abs(mu) + margin * sigma > kmax)
        throw Error(ErrorKind::GridTooCoarse,
                    fmt::format("term {}: |mu| + 6 sigma = {:g} exceeds momentum range {:g}", i,
                                std::abs(mu) + margin * sigma, kmax));
      // |g| in position has standard deviation 1 / (2 sigma), centered at x = 0.
      const double half_width = margin / (2.0 * sigma);
      if (-half_width < grid.x_min() || half_width > grid.x_max())
        throw Error(ErrorKind::GridTooCoarse,
                    fmt::format("term {}: position extent +-{:g} does not fit the box [{:g}, {:g}]", i,
                                half_width, grid.x_min(), grid.x_max()));
    }
  }
}

TwoParticleState synthesize(const GaussianSum& gsum, const GridSpec& grid) {
  check_resolves(gsum, grid);
  const std::size_t n = grid.n();
  std::vector<cplx> phi(n * n);
  const auto ks = grid.wavenumbers();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) phi[a * n + b] = gsum.momentum_amplitude(ks[a], ks[b]);
  const double dk = grid.dk();
  const double norm2 = sum_abs2(phi) * dk * dk;
  if (!(norm2 >= 1e-300)) throw Error(ErrorKind::NormUnderflow, fmt::format("squared norm {:g} < 1e-300", norm2));
  auto psi = spectral::to_position_2d(grid, phi);
  return TwoParticleState::normalized(grid, Basis::position, std::move(psi), gsum.hbar());
}

TwoParticleState transform(const TwoParticleState& state) {
  auto out = state.basis() == Basis::position ? spectral::to_momentum_2d(state.grid(), state.amps())
                                              : spectral::to_position_2d(state.grid(), state.amps());
  return TwoParticleState::from_normalized(state.grid(), opposite(state.basis()), std::move(out), state.hbar());
}

SingleParticleState transform(const SingleParticleState& state) {
  auto out = state.basis() == Basis::position ? spectral::to_momentum_1d(state.grid(), state.amps())
                                              : spectral::to_position_1d(state.grid(), state.amps());
  return SingleParticleState::normalized(state.grid(), opposite(state.basis()), std::move(out), state.hbar());
}

TwoParticleState to_basis(const TwoParticleState& state, Basis basis) {
  return state.basis() == basis ? state : transform(state);
}

SingleParticleState to_basis(const SingleParticleState& state, Basis basis) {
  return state.basis() == basis ? state : transform(state);
}

namespace {

std::vector<cplx> transposed(const GridSpec& g, std::span<const cplx> a) {
  const std::size_t n = g.n();
  std::vector<cplx> out(n * n);
  for (std::size_t j1 = 0; j1 < n; ++j1)
    for (std::size_t j2 = 0; j2 < n; ++j2) out[j2 * n + j1] = a[j1 * n + j2];
  return out;
}

void require_compatible(const GridSpec& g1, Basis b1, double h1, const GridSpec& g2, Basis b2, double h2) {
  if (!(g1 == g2)) throw Error(ErrorKind::GridMismatch, "states live on different grids");
  if (b1 != b2) throw Error(ErrorKind::GridMismatch, "states are in different bases");
  if (h1 != h2) throw Error(ErrorKind::GridMismatch, "states carry different hbar");
}

}  // namespace

TwoParticleState exchange(const TwoParticleState& state) {
  return TwoParticleState::from_normalized(state.grid(), state.basis(), transposed(state.grid(), state.amps()),
                                           state.hbar());
}

TwoParticleState symmetrize(const TwoParticleState& state, Parity parity) {
  const double sign = static_cast<double>(static_cast<int>(parity));
  auto swapped = transposed(state.grid(), state.amps());
  const auto amps = state.amps();
  for (std::size_t i = 0; i < swapped.size(); ++i) swapped[i] = amps[i] + sign * swapped[i];
  const double norm2 = sum_abs2(swapped) * state.weight();
  if (norm2 < 1e-12)
    throw Error(ErrorKind::AnnihilatedState,
                fmt::format("{} projection has squared norm {:g}",
                            parity == Parity::symmetric ? "symmetric" : "antisymmetric", norm2));
  return TwoParticleState::normalized(state.grid(), state.basis(), std::move(swapped), state.hbar());
}

cplx overlap(const TwoParticleState& s1, const TwoParticleState& s2) {
  require_compatible(s1.grid(), s1.basis(), s1.hbar(), s2.grid(), s2.basis(), s2.hbar());
  cplx acc{};
  const auto a = s1.amps();
  const auto b = s2.amps();
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc * s1.weight();
}

cplx overlap(const SingleParticleState& s1, const SingleParticleState& s2) {
  require_compatible(s1.grid(), s1.basis(), s1.hbar(), s2.grid(), s2.basis(), s2.hbar());
  cplx acc{};
  for (std::size_t i = 0; i < s1.amps().size(); ++i) acc += std::conj(s1[i]) * s2[i];
  return acc * s1.weight();
}

double l2_distance(const TwoParticleState& s1, const TwoParticleState& s2) {
  require_compatible(s1.grid(), s1.basis(), s1.hbar(), s2.grid(), s2.basis(), s2.hbar());
  double acc = 0.0;
  const auto a = s1.amps();
  const auto b = s2.amps();
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc * s1.weight());
}

TwoParticleState product_state(const SingleParticleState& psi, const SingleParticleState& phi) {
  if (!(psi.grid() == phi.grid()) || psi.basis() != phi.basis() || psi.hbar() != phi.hbar())
    throw Error(ErrorKind::GridMismatch, "product factors must share grid, basis and hbar");
  const std::size_t n = psi.grid().n();
  std::vector<cplx> amps(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) amps[a * n + b] = psi[a] * phi[b];
  return TwoParticleState::normalized(psi.grid(), psi.basis(), std::move(amps), psi.hbar());
}

void write_csv(const TwoParticleState& state, std::ostream& out) {
  const std::size_t n = state.grid().n();
  out << "j1,j2,re,im\n";
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const cplx v = state(a, b);
      out << fmt::format("{},{},{:.17g},{:.17g}\n", a, b, v.real(), v.imag());
    }
}

}  // namespace entangle
