#include "entangle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "entangle/error.hpp"

namespace entangle::oracle {
namespace {

constexpr int kPanels = 4;
constexpr unsigned kMaxDepth = 10;
constexpr double kTol = 1e-12;
// Density tails exp(-r^2 / 2) at r = 14 standard deviations are ~1e-43.
constexpr double kReach = 14.0;

struct Interval {
  double lo, hi;
};

double integrate(const std::function<double(double)>& f, Interval iv) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double h = (iv.hi - iv.lo) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double a = iv.lo + h * i;
    total += Rule::integrate(f, a, a + h, kMaxDepth, kTol);
  }
  return total;
}

Interval momentum_range(const GaussianSum& gsum, int axis) {
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (const auto& t : gsum.terms()) {
    const double mu = axis == 1 ? t.mu1 : t.mu2;
    const double sigma = axis == 1 ? t.sigma1 : t.sigma2;
    lo = std::min(lo, mu - kReach * sigma);
    hi = std::max(hi, mu + kReach * sigma);
  }
  return {lo, hi};
}

Interval position_range(const GaussianSum& gsum, int axis) {
  double reach = 0.0;
  for (const auto& t : gsum.terms()) {
    const double sigma = axis == 1 ? t.sigma1 : t.sigma2;
    reach = std::max(reach, kReach / (2.0 * sigma));
  }
  return {-reach, reach};
}

double ipow(double v, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= v;
  return r;
}

}  // namespace

double quadrature_moment(const GaussianSum& gsum, int e1, int e2, Quadrature which) {
  if (e1 < 0 || e2 < 0 || e1 + e2 > 4) throw Error(ErrorKind::UnsupportedOrder, "oracle supports order <= 4");
  const bool mom = which == Quadrature::momentum;
  const Interval r1 = mom ? momentum_range(gsum, 1) : position_range(gsum, 1);
  const Interval r2 = mom ? momentum_range(gsum, 2) : position_range(gsum, 2);
  const auto density = [&](double u, double v) {
    return std::norm(mom ? gsum.momentum_amplitude(u, v) : gsum.position_amplitude(u, v));
  };
  const auto double_integral = [&](int p1, int p2) {
    return integrate(
        [&](double u) {
          return ipow(u, p1) * integrate([&](double v) { return ipow(v, p2) * density(u, v); }, r2);
        },
        r1);
  };
  const double norm = double_integral(0, 0);
  const double scale = mom ? ipow(gsum.hbar(), e1 + e2) : 1.0;
  return scale * double_integral(e1, e2) / norm;
}

}  // namespace entangle::oracle
