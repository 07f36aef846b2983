#ifndef TORUSOPT_MAGIC_HPP
#define TORUSOPT_MAGIC_HPP

// The four-term magic function for the 4-point configuration on Z x 2 beta Z,
//
//   g~(t1, t2) = A + B t1 + C t2 + D t2^2,
//
// with f1 = theta~(pi/a1; .), f2 = theta~(pi/a2; .), a2 = 4 beta^2 a1 and
//
//   A = f1'(1) f2(-1) + f1(-1) f2(0)        B = f1'(1) f2(-1)
//   C = f1(-1) f2'(0)                       D = f1(-1)(f2'(0) - f2(0)) - f2(-1)(2 f1'(1) - f1(1)).
//
// g~ touches F~ = f1 f2 at the two difference images (-1, 0) and (1, -1) of the
// configuration. Certification checks that g~ is conditionally positive
// definite (B, C, D >= 0 on admissible frequencies) and stays below F~ on
// [-1, 1]^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "torusopt/lattice.hpp"
#include "torusopt/parallel.hpp"
#include "torusopt/precision.hpp"
#include "torusopt/theta.hpp"

namespace torusopt {

inline constexpr int kDefaultGrid = 256;
inline constexpr int kEdgeOversample = 8;
inline constexpr double kNodeRadius = 1e-3;
inline constexpr double kInterpTol = 1e-12;
inline constexpr double kCertInterpTol = 1e-10;
inline constexpr double kCpsdTol = 1e-12;
inline constexpr double kStayBelowTol = 1e-9;

/// theta~ data at the interpolation nodes. m/z/p = t at -1 / 0 / +1; d = first
/// derivative, dd = second derivative.
template <typename Scalar>
struct NodeValues {
  Scalar f1m{}, f1p{}, d1m{}, d1p{}, dd1m{}, dd1p{};
  Scalar f2m{}, f2z{}, f2p{}, d2m{}, d2z{}, dd2m{}, dd2z{};
};

template <typename Scalar = double>
struct MagicFunction {
  Scalar a1{}, beta{}, a2{};
  Scalar A{}, B{}, C{}, D{};
  NodeValues<Scalar> nodes;

  /// Coefficients in the Chebyshev basis T_{k1}(t1) T_{k2}(t2).
  std::map<FreqIndex, Scalar> cheb() const {
    return {{FreqIndex(0, 0), A + D / 2}, {FreqIndex(1, 0), B}, {FreqIndex(0, 1), C}, {FreqIndex(0, 2), D / 2}};
  }
};

template <typename Scalar>
struct Quadratic {
  Scalar c0{}, c1{}, c2{};
  Scalar operator()(const Scalar& t) const { return c0 + t * (c1 + t * c2); }
};

/// The quadratic q with q(-1) = fm1, q(0) = f0, q'(0) = df0.
template <typename Scalar>
Quadratic<Scalar> hermite_interpolant(const Scalar& fm1, const Scalar& f0, const Scalar& df0) {
  return {f0, df0, fm1 - f0 + df0};
}

template <typename Scalar>
Scalar eval_magic(const MagicFunction<Scalar>& mf, const Vec2<Scalar>& t) {
  return mf.A + mf.B * t[0] + mf.C * t[1] + mf.D * t[1] * t[1];
}

/// Same polynomial through the Chebyshev view.
template <typename Scalar>
Scalar eval_magic_cheb(const MagicFunction<Scalar>& mf, const Vec2<Scalar>& t) {
  Scalar s(0);
  for (const auto& [k, c] : mf.cheb()) {
    Scalar term = c;
    for (int i = 0; i < 2; ++i) {
      const Scalar x = t[i];
      switch (k[i]) {
        case 0: break;
        case 1: term *= x; break;
        case 2: term *= 2 * x * x - 1; break;
        default: throw std::logic_error("eval_magic_cheb: degree > 2");
      }
    }
    s += term;
  }
  return s;
}

/// Relative residuals of g~ - F~ at (-1, 0) and (1, -1).
template <typename Scalar>
std::array<Scalar, 2> interp_residuals(const MagicFunction<Scalar>& mf) {
  using std::abs;
  const auto& n = mf.nodes;
  const Scalar v0 = n.f1m * n.f2z, v1 = n.f1p * n.f2m;
  return {abs(eval_magic(mf, Vec2<Scalar>(-1, 0)) - v0) / v0, abs(eval_magic(mf, Vec2<Scalar>(1, -1)) - v1) / v1};
}

template <typename Scalar>
MagicFunction<Scalar> build_magic(Scalar a1, Scalar beta) {
  using std::abs;
  if (!(a1 > Scalar(0)) || !(beta > Scalar(0))) {
    throw std::invalid_argument("build_magic: need a1 > 0 and beta > 0");
  }
  MagicFunction<Scalar> mf;
  mf.a1 = a1;
  mf.beta = beta;
  mf.a2 = 4 * beta * beta * a1;
  const Scalar c1 = pi<Scalar>() / mf.a1, c2 = pi<Scalar>() / mf.a2;
  const auto e1m = theta_tilde(c1, Scalar(-1), 2), e1p = theta_tilde(c1, Scalar(1), 2);
  const auto e2m = theta_tilde(c2, Scalar(-1), 2), e2z = theta_tilde(c2, Scalar(0), 2);
  const auto e2p = theta_tilde(c2, Scalar(1), 0);
  auto& n = mf.nodes;
  n.f1m = e1m.value, n.d1m = e1m.derivs[0], n.dd1m = e1m.derivs[1];
  n.f1p = e1p.value, n.d1p = e1p.derivs[0], n.dd1p = e1p.derivs[1];
  n.f2m = e2m.value, n.d2m = e2m.derivs[0], n.dd2m = e2m.derivs[1];
  n.f2z = e2z.value, n.d2z = e2z.derivs[0], n.dd2z = e2z.derivs[1];
  n.f2p = e2p.value;

  mf.B = n.d1p * n.f2m;
  mf.A = mf.B + n.f1m * n.f2z;
  mf.C = n.f1m * n.d2z;
  mf.D = n.f1m * (n.d2z - n.f2z) - n.f2m * (2 * n.d1p - n.f1p);

  // The interpolation identities are exact; what is left is rounding, which
  // can exceed 1e-12 of the node value when |A|..|D| dwarf it (large a2).
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar terms = abs(mf.A) + abs(mf.B) + abs(mf.C) + abs(mf.D);
  const Scalar r0 = abs(eval_magic(mf, Vec2<Scalar>(-1, 0)) - n.f1m * n.f2z);
  const Scalar r1 = abs(eval_magic(mf, Vec2<Scalar>(1, -1)) - n.f1p * n.f2m);
  if (r0 > Scalar(kInterpTol) * n.f1m * n.f2z + 16 * eps * terms ||
      r1 > Scalar(kInterpTol) * n.f1p * n.f2m + 16 * eps * terms) {
    throw std::logic_error("build_magic: interpolation identities violated");
  }
  return mf;
}

template <typename To, typename From>
MagicFunction<To> narrow_magic(const MagicFunction<From>& m) {
  auto cv = [](const From& x) { return static_cast<To>(x); };
  MagicFunction<To> out;
  out.a1 = cv(m.a1), out.beta = cv(m.beta), out.a2 = cv(m.a2);
  out.A = cv(m.A), out.B = cv(m.B), out.C = cv(m.C), out.D = cv(m.D);
  const auto& a = m.nodes;
  auto& b = out.nodes;
  b.f1m = cv(a.f1m), b.f1p = cv(a.f1p), b.d1m = cv(a.d1m), b.d1p = cv(a.d1p);
  b.dd1m = cv(a.dd1m), b.dd1p = cv(a.dd1p);
  b.f2m = cv(a.f2m), b.f2z = cv(a.f2z), b.f2p = cv(a.f2p), b.d2m = cv(a.d2m), b.d2z = cv(a.d2z);
  b.dd2m = cv(a.dd2m), b.dd2z = cv(a.dd2z);
  return out;
}

/// min(B, C, D); the nonconstant coefficients must be nonnegative.
template <typename Scalar>
Scalar check_cpsd(const MagicFunction<Scalar>& mf) {
  return std::min({mf.B, mf.C, mf.D});
}

/// True when no nonzero coefficient sits on a frequency the centred lattice forbids.
/// The constant term is exempt.
template <typename Scalar>
bool check_vanishing(const std::map<FreqIndex, Scalar>& coeffs) {
  for (const auto& [k, c] : coeffs) {
    if (k == FreqIndex(0, 0) || c == Scalar(0)) continue;
    if (is_forbidden_freq(k)) return false;
  }
  return true;
}

template <typename Scalar>
bool check_vanishing(const MagicFunction<Scalar>& mf) {
  return check_vanishing(mf.cheb());
}

/// n^2 <g~> - n g~(1, 1): the LP lower bound on the normalized energy of any n points.
template <typename Scalar>
Scalar lp_bound(const MagicFunction<Scalar>& mf, int n) {
  if (n < 1) throw std::invalid_argument("lp_bound: n must be >= 1");
  const Scalar nn(n);
  return nn * nn * (mf.A + mf.D / 2) - nn * eval_magic(mf, Vec2<Scalar>(1, 1));
}

/// Outcome of every certificate clause. Margins are stored in long double,
/// which keeps the exponent range of the small quantities at large a.
struct CertReport {
  double a1 = 0, beta = 0, a2 = 0;
  int grid_n = 0;
  unsigned node_digits = 0;  // MPFR digits for node quantities; 0 = working precision
  unsigned grid_digits = 0;  // MPFR digits for grid sampling; 0 = long double
  long double A = 0, B = 0, C = 0, D = 0;
  long double f11 = 0;  // F~(1, 1), scale for the absolute thresholds
  long double cpsd_margin = 0;
  std::array<long double, 2> interp_residuals{};
  bool vanishing_ok = false;
  long double grid_min = 0;
  long double hessian_max_det = 0;
  long double hessian_F_max_det = 0;
  bool hessian_chain_ok = false;  // det H[F~ - g~] < det H[F~] < 0 at every grid point
  std::array<long double, 4> boundary_margins{};  // edges t1 = -1, t1 = 1, t2 = -1, t2 = 1
  long double node_model_min = 0;
  long double t1_partial_min = 0;  // d/dt1 (F~ - g~) at (1, t2), t2 > -1
  long double cross_margin = 0;  // 1 - f1'(1) f2(-1) / (f1'(-1) f2(1))
  long double lp_bound4 = 0, energy_star = 0, sharpness_gap = 0;
  bool verdict = false;
  std::string failed_clause;
  std::string label = "numerical certificate";
};

namespace detail {

// Minimum of h0 + h1 s + h2 s^2 / 2 over s in [lo, hi].
template <typename Scalar>
Scalar quadratic_min(const Scalar& h0, const Scalar& h1, const Scalar& h2, const Scalar& lo, const Scalar& hi) {
  auto m = [&](const Scalar& s) { return h0 + h1 * s + h2 * s * s / 2; };
  Scalar best = std::min(m(lo), m(hi));
  if (h2 > Scalar(0)) {
    const Scalar v = -h1 / h2;
    if (v > lo && v < hi) best = std::min(best, m(v));
  }
  return best;
}

inline std::vector<double> chebyshev_interior(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = std::cos(3.141592653589793 * (i + 0.5) / n);
  return t;
}

inline std::vector<double> chebyshev_lobatto(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = std::cos(3.141592653589793 * i / (n - 1));
  t.front() = 1;
  t.back() = -1;
  return t;
}

}  // namespace detail

/// Clauses that only need node data: CPSD, interpolation, vanishing, the
/// cross inequality and second-order models of F~ - g~ at the nodes.
template <typename Scalar>
void fill_node_clauses(const MagicFunction<Scalar>& mf, CertReport& r) {
  const auto& n = mf.nodes;
  auto ld = [](const Scalar& x) { return static_cast<long double>(x); };
  r.a1 = static_cast<double>(mf.a1);
  r.beta = static_cast<double>(mf.beta);
  r.a2 = static_cast<double>(mf.a2);
  r.A = ld(mf.A), r.B = ld(mf.B), r.C = ld(mf.C), r.D = ld(mf.D);
  r.f11 = ld(n.f1p * n.f2p);
  r.cpsd_margin = ld(check_cpsd(mf));
  const auto res = interp_residuals(mf);
  r.interp_residuals = {ld(res[0]), ld(res[1])};
  r.vanishing_ok = check_vanishing(mf);
  r.cross_margin = ld(1 - (n.d1p * n.f2m) / (n.d1m * n.f2p));

  const Scalar rad(kNodeRadius), zero(0);
  // (-1, 0) along the edge t1 = -1, both directions in t2.
  Scalar worst = detail::quadratic_min(n.f1m * n.f2z - (mf.A - mf.B), n.f1m * n.d2z - mf.C,
                                       n.f1m * n.dd2z - 2 * mf.D, Scalar(-rad), rad);
  // (-1, 0) into the square along t1.
  worst = std::min(worst, detail::quadratic_min(n.f1m * n.f2z - (mf.A - mf.B), n.d1m * n.f2z - mf.B,
                                                n.dd1m * n.f2z, zero, rad));
  // (1, -1) along t1 = 1, s = t2 + 1.
  const Scalar corner = n.f1p * n.f2m - eval_magic(mf, Vec2<Scalar>(1, -1));
  worst = std::min(worst, detail::quadratic_min(corner, n.f1p * n.d2m - mf.C + 2 * mf.D,
                                                n.f1p * n.dd2m - 2 * mf.D, zero, rad));
  // (1, -1) along t2 = -1, s = 1 - t1.
  worst = std::min(worst, detail::quadratic_min(corner, mf.B - n.d1p * n.f2m, n.dd1p * n.f2m, zero, rad));
  r.node_model_min = ld(worst);
}

/// Sampled clauses: Hessian sign on the interior grid, interior minimum, the
/// four edges away from the nodes and the t1-slope along t1 = 1.
template <typename Scalar>
void fill_grid_clauses(const MagicFunction<Scalar>& mf, int grid_n, CertReport& r) {
  if (grid_n < 64) throw std::invalid_argument("certify: grid_n must be >= 64");
  r.grid_n = grid_n;
  const Scalar c1 = pi<Scalar>() / mf.a1, c2 = pi<Scalar>() / mf.a2;
  auto ld = [](const Scalar& x) { return static_cast<long double>(x); };

  const auto tg = detail::chebyshev_interior(grid_n);
  const auto g1 = parallel_map<ThetaEval<Scalar>>(tg.size(), [&](std::size_t i) { return theta_tilde(c1, Scalar(tg[i]), 2); });
  const auto g2 = parallel_map<ThetaEval<Scalar>>(tg.size(), [&](std::size_t i) { return theta_tilde(c2, Scalar(tg[i]), 2); });

  // Row-wise reductions, combined in row order.
  struct Row {
    Scalar det_max, detF_max, fmin;
    bool chain = true;
  };
  const auto rows = parallel_map<Row>(tg.size(), [&](std::size_t i) {
    const auto& a = g1[i];
    Row row{Scalar(-std::numeric_limits<double>::infinity()), Scalar(-std::numeric_limits<double>::infinity()),
            Scalar(std::numeric_limits<double>::infinity())};
    for (std::size_t j = 0; j < tg.size(); ++j) {
      const auto& b = g2[j];
      const Scalar detF = a.derivs[1] * a.value * b.derivs[1] * b.value - a.derivs[0] * a.derivs[0] * b.derivs[0] * b.derivs[0];
      const Scalar shift = a.derivs[1] * b.value * mf.D;
      const Scalar det = detF - 2 * shift;
      row.det_max = std::max(row.det_max, det);
      row.detF_max = std::max(row.detF_max, detF);
      row.chain = row.chain && detF < Scalar(0) && shift > Scalar(0);
      const Vec2<Scalar> t(Scalar(tg[i]), Scalar(tg[j]));
      const double dn = std::min(std::hypot(tg[i] + 1, tg[j]), std::hypot(tg[i] - 1, tg[j] + 1));
      if (dn > kNodeRadius) row.fmin = std::min(row.fmin, Scalar(a.value * b.value - eval_magic(mf, t)));
    }
    return row;
  });
  Scalar det_max = rows[0].det_max, detF_max = rows[0].detF_max, fmin = rows[0].fmin;
  bool chain = true;
  for (const auto& row : rows) {
    det_max = std::max(det_max, row.det_max);
    detF_max = std::max(detF_max, row.detF_max);
    fmin = std::min(fmin, row.fmin);
    chain = chain && row.chain;
  }
  r.hessian_max_det = ld(det_max);
  r.hessian_F_max_det = ld(detF_max);
  r.hessian_chain_ok = chain;
  r.grid_min = ld(fmin);

  // Edges on a Chebyshev-Lobatto grid, s[0] = 1 and s[m-1] = -1.
  const auto s = detail::chebyshev_lobatto(kEdgeOversample * grid_n);
  const auto e1 = parallel_map<Scalar>(s.size(), [&](std::size_t k) { return theta_tilde(c1, Scalar(s[k]), 0).value; });
  const auto e2 = parallel_map<Scalar>(s.size(), [&](std::size_t k) { return theta_tilde(c2, Scalar(s[k]), 0).value; });
  const Scalar f1p = e1.front(), f1m = e1.back(), f2p = e2.front(), f2m = e2.back();
  const Scalar inf(std::numeric_limits<double>::infinity());
  std::array<Scalar, 4> edge{inf, inf, inf, inf};
  Scalar slope = inf;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Scalar x(s[k]);
    if (std::abs(s[k]) > kNodeRadius) edge[0] = std::min(edge[0], Scalar(f1m * e2[k] - eval_magic(mf, Vec2<Scalar>(-1, x))));
    if (s[k] + 1 > kNodeRadius) {
      edge[1] = std::min(edge[1], Scalar(f1p * e2[k] - eval_magic(mf, Vec2<Scalar>(1, x))));
      slope = std::min(slope, Scalar(mf.nodes.d1p * (e2[k] - f2m)));
    }
    if (1 - s[k] > kNodeRadius) edge[2] = std::min(edge[2], Scalar(e1[k] * f2m - eval_magic(mf, Vec2<Scalar>(x, -1))));
    edge[3] = std::min(edge[3], Scalar(e1[k] * f2p - eval_magic(mf, Vec2<Scalar>(x, 1))));
  }
  for (int e = 0; e < 4; ++e) r.boundary_margins[e] = ld(edge[e]);
  r.t1_partial_min = ld(slope);
}

/// Sets verdict and failed_clause from the recorded margins.
void finalize_verdict(CertReport& r);

/// All clauses evaluated in the precision of mf.
template <typename Scalar>
CertReport certify_stay_below(const MagicFunction<Scalar>& mf, int grid_n = kDefaultGrid) {
  CertReport r;
  fill_node_clauses(mf, r);
  fill_grid_clauses(mf, grid_n, r);
  r.lp_bound4 = static_cast<long double>(lp_bound(mf, 4));
  finalize_verdict(r);
  return r;
}

/// Precision plan for certify: MPFR digits for node data, and for grid
/// sampling (0 = long double).
struct PrecisionPlan {
  unsigned node_digits;
  unsigned grid_digits;
};
PrecisionPlan plan_precision(double a1, double beta);

/// Full certificate for (a1, beta): node quantities, the LP bound and the
/// energy of the canonical configuration in MPFR, grid sampling per the plan.
CertReport certify(double a1, double beta, int grid_n = kDefaultGrid);

}  // namespace torusopt

#endif  // TORUSOPT_MAGIC_HPP
