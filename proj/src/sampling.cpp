#include "entangle/sampling.hpp"

#include <complex>
#include <numbers>

namespace entangle {

GridSpec default_sampling_grid() { return GridSpec(256, 0.1, 0.0); }

GaussianTerm random_term(std::mt19937_64& rng, const SamplingRanges& r) {
  std::uniform_real_distribution<double> mag(r.coeff_min, r.coeff_max);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> mu(-r.mu_max, r.mu_max);
  std::uniform_real_distribution<double> sigma(r.sigma_min, r.sigma_max);
  GaussianTerm t;
  // Draw order is fixed so a seed reproduces the same terms everywhere.
  const double m = mag(rng);
  const double ph = phase(rng);
  t.coeff = std::polar(m, ph);
  t.mu1 = mu(rng);
  t.sigma1 = sigma(rng);
  t.mu2 = mu(rng);
  t.sigma2 = sigma(rng);
  return t;
}

GaussianSum random_gaussian_sum(std::mt19937_64& rng, const SamplingRanges& r, double hbar) {
  std::uniform_int_distribution<int> count(r.min_terms, r.max_terms);
  const int n = count(rng);
  std::vector<GaussianTerm> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) terms.push_back(random_term(rng, r));
  return GaussianSum(std::move(terms), hbar);
}

GaussianSum random_product_sum(std::mt19937_64& rng, const SamplingRanges& r, double hbar) {
  return GaussianSum({random_term(rng, r)}, hbar);
}

}  // namespace entangle
