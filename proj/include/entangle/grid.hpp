#pragma once

// Two-particle wavefunctions on a shared 1D grid: discrete amplitude grids,
// the analytic Gaussian-sum representation, basis changes and the exchange
// (particle-label swap) machinery.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace entangle {

using cplx = std::complex<double>;

enum class Basis { position, momentum };

Basis opposite(Basis b);

/// Uniform axis discretization used for both particles.
///
/// Samples are x_j = x0 + (j - n/2) dx and k_m = (m - n/2) dk with
/// dk = 2 pi / (n dx), so k = 0 sits at index n/2 in the momentum layout.
class GridSpec {
 public:
  /// Throws InvalidArgument unless n >= 8 is a power of two and dx > 0.
  GridSpec(std::size_t n, double dx, double x0 = 0.0);

  std::size_t n() const { return n_; }
  double dx() const { return dx_; }
  double x0() const { return x0_; }
  double dk() const;
  double length() const { return static_cast<double>(n_) * dx_; }

  double x(std::size_t j) const { return x0_ + (static_cast<double>(j) - static_cast<double>(n_ / 2)) * dx_; }
  double k(std::size_t m) const { return (static_cast<double>(m) - static_cast<double>(n_ / 2)) * dk(); }

  double x_min() const { return x(0); }
  double x_max() const { return x(n_ - 1); }
  /// Largest wavenumber magnitude available symmetrically on both sides.
  double k_max() const { return k(n_ - 1); }

  std::vector<double> positions() const;
  std::vector<double> wavenumbers() const;

  bool operator==(const GridSpec&) const = default;

 private:
  std::size_t n_;
  double dx_;
  double x0_;
};

/// Normalized pure state of two particles on an n x n grid. Amplitudes are
/// stored row-major: index j1 * n + j2 holds the value at (axis-1 sample j1,
/// axis-2 sample j2). Immutable after construction.
class TwoParticleState {
 public:
  /// Rescales `amps` to unit weighted norm. Throws NormUnderflow when the
  /// squared norm is below 1e-300, InvalidArgument on size mismatch or
  /// non-finite values.
  static TwoParticleState normalized(const GridSpec& grid, Basis basis, std::vector<cplx> amps,
                                     double hbar = 1.0);

  /// Accepts `amps` as is; they must already have unit norm within 1e-10.
  static TwoParticleState from_normalized(const GridSpec& grid, Basis basis, std::vector<cplx> amps,
                                          double hbar = 1.0);

  const GridSpec& grid() const { return grid_; }
  Basis basis() const { return basis_; }
  double hbar() const { return hbar_; }
  std::span<const cplx> amps() const { return amps_; }
  cplx operator()(std::size_t j1, std::size_t j2) const { return amps_[j1 * grid_.n() + j2]; }

  /// Quadrature weight per sample: dx^2 in position basis, dk^2 in momentum.
  double weight() const;
  double norm_squared() const;

 private:
  TwoParticleState(const GridSpec& grid, Basis basis, std::vector<cplx> amps, double hbar);

  GridSpec grid_;
  Basis basis_;
  double hbar_;
  std::vector<cplx> amps_;
};

/// Normalized pure state of one particle; used for conditioned particle-2 states.
class SingleParticleState {
 public:
  static SingleParticleState normalized(const GridSpec& grid, Basis basis, std::vector<cplx> amps,
                                        double hbar = 1.0);

  const GridSpec& grid() const { return grid_; }
  Basis basis() const { return basis_; }
  double hbar() const { return hbar_; }
  std::span<const cplx> amps() const { return amps_; }
  cplx operator[](std::size_t j) const { return amps_[j]; }

  double weight() const;
  double norm_squared() const;

 private:
  SingleParticleState(const GridSpec& grid, Basis basis, std::vector<cplx> amps, double hbar);

  GridSpec grid_;
  Basis basis_;
  double hbar_;
  std::vector<cplx> amps_;
};

/// coeff * g(k1; mu1, sigma1) * g(k2; mu2, sigma2), g(k; mu, s) = exp(-(k - mu)^2 / (4 s^2)).
struct GaussianTerm {
  cplx coeff{1.0, 0.0};
  double mu1 = 0.0;
  double sigma1 = 1.0;
  double mu2 = 0.0;
  double sigma2 = 1.0;
};

/// Momentum-space amplitude written as a sum of separable Gaussian terms.
/// The sum is not assumed normalized.
class GaussianSum {
 public:
  /// Throws InvalidArgument on an empty list, a non-positive sigma, non-finite
  /// parameters, all-zero coefficients or hbar <= 0.
  explicit GaussianSum(std::vector<GaussianTerm> terms, double hbar = 1.0);

  std::span<const GaussianTerm> terms() const { return terms_; }
  double hbar() const { return hbar_; }

  /// f(k1, k2) = sum_t coeff_t g(k1) g(k2).
  cplx momentum_amplitude(double k1, double k2) const;

  /// Psi(x1, x2) = (1 / 2pi) * integral f(k1, k2) exp(i(k1 x1 + k2 x2)) dk1 dk2,
  /// in closed form: each g maps to sqrt(2) s exp(i mu x) exp(-s^2 x^2).
  cplx position_amplitude(double x1, double x2) const;

 private:
  std::vector<GaussianTerm> terms_;
  double hbar_;
};

enum class Parity : int { symmetric = 1, antisymmetric = -1 };

/// Throws GridTooCoarse when some term is not resolved by `grid` with a
/// six-standard-deviation margin in both position and momentum.
void check_resolves(const GaussianSum& gsum, const GridSpec& grid);

/// Samples `gsum` on the momentum grid and returns the normalized
/// position-basis state.
TwoParticleState synthesize(const GaussianSum& gsum, const GridSpec& grid);

/// Switches basis with the centered unitary 2D DFT.
TwoParticleState transform(const TwoParticleState& state);
SingleParticleState transform(const SingleParticleState& state);

TwoParticleState to_basis(const TwoParticleState& state, Basis basis);
SingleParticleState to_basis(const SingleParticleState& state, Basis basis);

/// Swaps the particle labels (transposes the amplitude grid).
TwoParticleState exchange(const TwoParticleState& state);

/// normalize(s + sign * exchange(s)); AnnihilatedState if the result has
/// squared norm below 1e-12.
TwoParticleState symmetrize(const TwoParticleState& state, Parity parity);

/// Weighted inner product <s1|s2>; GridMismatch unless grids, bases and hbar agree.
cplx overlap(const TwoParticleState& s1, const TwoParticleState& s2);
cplx overlap(const SingleParticleState& s1, const SingleParticleState& s2);

/// Weighted L2 distance ||s1 - s2||.
double l2_distance(const TwoParticleState& s1, const TwoParticleState& s2);

/// psi (x) phi with psi on axis 1 and phi on axis 2.
TwoParticleState product_state(const SingleParticleState& psi, const SingleParticleState& phi);

/// Debug dump: header `j1,j2,re,im`, one row per grid point, LF endings.
void write_csv(const TwoParticleState& state, std::ostream& out);

}  // namespace entangle
