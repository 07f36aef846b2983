#include "torusopt/magic.hpp"

#include <algorithm>
#include <cmath>

#include "torusopt/energy.hpp"

namespace torusopt {

void finalize_verdict(CertReport& r) {
  const long double floor = -static_cast<long double>(kStayBelowTol) * r.f11;
  auto fail = [&](const char* clause) {
    r.verdict = false;
    r.failed_clause = clause;
  };
  r.verdict = true;
  r.failed_clause.clear();
  if (!(r.interp_residuals[0] <= kCertInterpTol && r.interp_residuals[1] <= kCertInterpTol)) return fail("interpolation");
  // Relative to the largest coefficient: at small a all of B, C, D are tiny.
  const long double cpsd_scale = std::max({std::abs(r.B), std::abs(r.C), std::abs(r.D)});
  if (!(r.cpsd_margin >= -kCpsdTol * cpsd_scale)) return fail("cpsd");
  if (!r.vanishing_ok) return fail("vanishing");
  if (!(r.hessian_max_det < 0) || !r.hessian_chain_ok) return fail("hessian");
  if (!(r.grid_min >= floor)) return fail("interior_min");
  for (long double m : r.boundary_margins) {
    if (!(m >= floor)) return fail("boundary");
  }
  if (!(r.node_model_min >= floor)) return fail("node_model");
  if (!(r.t1_partial_min > 0)) return fail("t1_slope");
  if (!(r.cross_margin > 0)) return fail("cross");
}

PrecisionPlan plan_precision(double a1, double beta) {
  const double pi2 = 9.869604401089358, ln10 = std::log(10.0);
  const double a2 = 4 * beta * beta * a1;
  const double d1 = pi2 / a1, d2 = pi2 / a2;
  // Small a: D is ~e^{-4 min(d)} of its summands. Large a: the node value at
  // (1, -1) is ~e^{-|3 a2/16 - a1/4|} of the terms that cancel into it.
  const double node_need = std::max(4 * std::min(d1, d2), std::abs(3 * a2 / 16 - a1 / 4)) / ln10 + std::log10(1 + a1 + a2);
  PrecisionPlan plan{30u + static_cast<unsigned>(std::ceil(1.1 * node_need)), 0u};
  // f2(t) - f2(-1) ~ e^{-d2} (t + 1) must stay resolvable on the t1 = 1 edge;
  // beyond a2 ~ 4e4 the node values leave the long double range.
  if (d2 / ln10 >= 10 || a2 >= 4e4) plan.grid_digits = 30u + static_cast<unsigned>(std::ceil(1.5 * d2 / ln10));
  return plan;
}

CertReport certify(double a1, double beta, int grid_n) {
  if (!(a1 > 0) || !(beta > 0) || !std::isfinite(a1) || !std::isfinite(beta)) {
    throw std::invalid_argument("certify: need finite a1 > 0 and beta > 0");
  }
  if (grid_n < 64) throw std::invalid_argument("certify: grid_n must be >= 64");
  const PrecisionPlan plan = plan_precision(a1, beta);
  CertReport r;
  PrecisionGuard guard(plan.node_digits);
  const Mp A1(a1), Be(beta);
  const auto mf = build_magic<Mp>(A1, Be);
  fill_node_clauses(mf, r);

  const Mp lp = lp_bound(mf, 4);
  const GaussParam<Mp> p(A1, RectLattice<Mp>(Mp(1), 2 * Be));
  const Mp e = config_energy(canonical_config<Mp>(Be, 2), p).energy_normalized;
  r.lp_bound4 = static_cast<long double>(lp);
  r.energy_star = static_cast<long double>(e);
  r.sharpness_gap = static_cast<long double>(abs(e - lp) / e);

  if (plan.grid_digits == 0) {
    fill_grid_clauses(narrow_magic<long double>(mf), grid_n, r);
  } else {
    PrecisionGuard grid_guard(plan.grid_digits);
    fill_grid_clauses(mf, grid_n, r);
  }
  r.node_digits = plan.node_digits;
  r.grid_digits = plan.grid_digits;
  finalize_verdict(r);
  return r;
}

}  // namespace torusopt
