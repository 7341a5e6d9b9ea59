#pragma once

// Seeded generators of random Gaussian-sum states for the property suites.

#include <random>

#include "entangle/grid.hpp"

namespace entangle {

/// Parameter ranges for random terms. Defaults are resolved by
/// `default_sampling_grid()` with the 6-sigma margin to spare.
struct SamplingRanges {
  int min_terms = 1;
  int max_terms = 4;
  double coeff_min = 0.2;  ///< coefficient magnitude; phase is uniform
  double coeff_max = 1.0;
  double mu_max = 3.0;  ///< |mu| <= mu_max (wavenumber)
  double sigma_min = 0.5;
  double sigma_max = 1.5;
};

/// n = 256, dx = 0.1, x0 = 0.
GridSpec default_sampling_grid();

GaussianTerm random_term(std::mt19937_64& rng, const SamplingRanges& ranges);

/// Sum of a uniformly drawn number of terms in [min_terms, max_terms].
GaussianSum random_gaussian_sum(std::mt19937_64& rng, const SamplingRanges& ranges = {}, double hbar = 1.0);

/// Single-term (separable) sum.
GaussianSum random_product_sum(std::mt19937_64& rng, const SamplingRanges& ranges = {}, double hbar = 1.0);

}  // namespace entangle
