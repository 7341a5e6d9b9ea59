#include "entangle/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace entangle::spectral {
namespace {

// The FFTW planner is not reentrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void fft_inplace(std::vector<cplx>& data, std::size_t n, int rank, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    plan = rank == 1 ? fftw_plan_dft_1d(ni, buf, buf, sign, FFTW_ESTIMATE)
                     : fftw_plan_dft_2d(ni, ni, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

double alternating(std::size_t j) { return (j % 2 == 0) ? 1.0 : -1.0; }

// Per-axis factors applied before and after the raw FFT. With n/2 even the
// centered kernel exp(-i k_m x_j) factors into (-1)^j (-1)^m exp(-i k_m x0)
// times the plain DFT kernel.
struct AxisFactors {
  std::vector<cplx> pre;
  std::vector<cplx> post;
};

AxisFactors forward_factors(const GridSpec& g) {
  const std::size_t n = g.n();
  const double scale = g.dx() / std::sqrt(2.0 * std::numbers::pi);
  AxisFactors f{std::vector<cplx>(n), std::vector<cplx>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    f.pre[j] = alternating(j);
    f.post[j] = alternating(j) * scale * std::polar(1.0, -g.k(j) * g.x0());
  }
  return f;
}

AxisFactors inverse_factors(const GridSpec& g) {
  const std::size_t n = g.n();
  const double scale = g.dk() / std::sqrt(2.0 * std::numbers::pi);
  AxisFactors f{std::vector<cplx>(n), std::vector<cplx>(n)};
  for (std::size_t m = 0; m < n; ++m) {
    f.pre[m] = alternating(m) * std::polar(1.0, g.k(m) * g.x0());
    f.post[m] = alternating(m) * scale;
  }
  return f;
}

std::vector<cplx> run_2d(const GridSpec& g, std::span<const cplx> in, const AxisFactors& f, int sign) {
  const std::size_t n = g.n();
  std::vector<cplx> data(in.begin(), in.end());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) data[a * n + b] *= f.pre[a] * f.pre[b];
  fft_inplace(data, n, 2, sign);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) data[a * n + b] *= f.post[a] * f.post[b];
  return data;
}

std::vector<cplx> run_1d(const GridSpec& g, std::span<const cplx> in, const AxisFactors& f, int sign) {
  const std::size_t n = g.n();
  std::vector<cplx> data(in.begin(), in.end());
  for (std::size_t a = 0; a < n; ++a) data[a] *= f.pre[a];
  fft_inplace(data, n, 1, sign);
  for (std::size_t a = 0; a < n; ++a) data[a] *= f.post[a];
  return data;
}

}  // namespace

std::vector<cplx> to_momentum_2d(const GridSpec& grid, std::span<const cplx> psi) {
  return run_2d(grid, psi, forward_factors(grid), FFTW_FORWARD);
}

std::vector<cplx> to_position_2d(const GridSpec& grid, std::span<const cplx> phi) {
  return run_2d(grid, phi, inverse_factors(grid), FFTW_BACKWARD);
}

std::vector<cplx> to_momentum_1d(const GridSpec& grid, std::span<const cplx> psi) {
  return run_1d(grid, psi, forward_factors(grid), FFTW_FORWARD);
}

std::vector<cplx> to_position_1d(const GridSpec& grid, std::span<const cplx> phi) {
  return run_1d(grid, phi, inverse_factors(grid), FFTW_BACKWARD);
}

}  // namespace entangle::spectral
