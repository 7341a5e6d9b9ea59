#pragma once

// Brute-force moment oracle: nested adaptive Gauss-Kronrod quadrature over
// the closed-form |f(k1, k2)|^2 and |Psi(x1, x2)|^2 of a GaussianSum. It
// shares no code with the Gaussian-identity moments in observables.cpp and
// exists to check them.

#include "entangle/grid.hpp"
#include "entangle/observables.hpp"

namespace entangle::oracle {

/// <x1^e1 x2^e2> or hbar^(e1+e2) <k1^e1 k2^e2>, normalized by the integral
/// of the density itself.
double quadrature_moment(const GaussianSum& gsum, int e1, int e2, Quadrature which);

}  // namespace entangle::oracle
