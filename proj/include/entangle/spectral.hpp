#pragma once

// Raw-array spectral transforms shared by the state, operator and scenario
// code. Convention: phi(k_m) = dx / sqrt(2 pi) * sum_j psi(x_j) exp(-i k_m x_j)
// per axis, i.e. the unitary DFT rescaled so that sum |psi|^2 dx equals
// sum |phi|^2 dk exactly.

#include <span>
#include <vector>

#include "entangle/grid.hpp"

namespace entangle::spectral {

std::vector<cplx> to_momentum_2d(const GridSpec& grid, std::span<const cplx> psi);
std::vector<cplx> to_position_2d(const GridSpec& grid, std::span<const cplx> phi);

std::vector<cplx> to_momentum_1d(const GridSpec& grid, std::span<const cplx> psi);
std::vector<cplx> to_position_1d(const GridSpec& grid, std::span<const cplx> phi);

}  // namespace entangle::spectral
