#include "entangle/relations.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "entangle/error.hpp"

namespace entangle {
namespace {

constexpr double kRelTol = 1e-9;

BoundCheck check(double value, double bound) {
  return {value, bound, value >= bound * (1.0 - kRelTol), value - bound};
}

double root(double v) { return std::sqrt(std::max(v, 0.0)); }

}  // namespace

UncertaintyReport evaluate_relations(const MomentSet& ms, double symmetric_threshold) {
  const double h = ms.hbar;
  UncertaintyReport r;
  r.heis_1 = check(root(ms.var_q1()) * root(ms.var_p1()), h / 2.0);
  r.heis_2 = check(root(ms.var_q2()) * root(ms.var_p2()), h / 2.0);

  r.q_factor = ms.var_q1() + ms.var_q2() + 2.0 * ms.cov_q();
  r.p_factor = ms.var_p1() + ms.var_p2() + 2.0 * ms.cov_p();
  if (r.q_factor < -1e-9 || r.p_factor < -1e-9)
    throw Error(ErrorKind::NegativeVarianceFactor,
                fmt::format("extended variance factors ({:g}, {:g}) must be non-negative", r.q_factor, r.p_factor));
  r.general = check(r.q_factor * r.p_factor, h * h);

  const double dq1 = root(ms.var_q1());
  const double dq2 = root(ms.var_q2());
  const double scale = std::max(dq1, dq2);
  r.position_mismatch = scale > 0.0 ? std::abs(dq1 - dq2) / scale : 0.0;
  if (r.position_mismatch <= symmetric_threshold) {
    SymmetricForm s;
    static_cast<BoundCheck&>(s) =
        check((ms.var_q2() + ms.cov_q()) * ((ms.var_p1() + ms.var_p2()) / 2.0 + ms.cov_p()), h * h / 4.0);
    s.applicable = true;
    s.mismatch = r.position_mismatch;
    r.symmetric_form = s;
  }
  return r;
}

}  // namespace entangle
