#include "torusopt/apxbounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

#include "torusopt/magic.hpp"
#include "torusopt/parallel.hpp"
#include "torusopt/precision.hpp"
#include "torusopt/theta.hpp"

namespace torusopt {

namespace {

constexpr double kPi2 = 9.869604401089358;
constexpr double kLn10 = 2.302585092994046;
constexpr double kThreshold = 272 * 3.141592653589793 / 65;  // 272 pi / 65
// Region membership slack for points placed on a boundary by rounding.
constexpr double kRegionTol = 1e-12;
constexpr int kMaxBisections = 20;

Mp P() { return pi<Mp>(); }
Mp P2() { return pi<Mp>() * pi<Mp>(); }
Mp q(long n, long d) { return Mp(n) / Mp(d); }

BoundLedgerEntry make_entry(std::string name, std::string region, std::string param_name, double param, double beta,
                            const Mp& lhs, const Mp& mid, const std::optional<Mp>& rhs) {
  BoundLedgerEntry e;
  e.name = std::move(name);
  e.region = std::move(region);
  e.param_name = std::move(param_name);
  e.param = param;
  e.beta = beta;
  e.lhs = static_cast<long double>(lhs);
  e.mid = static_cast<long double>(mid);
  Mp margin = mid - lhs;
  Mp scale = std::max(abs(lhs), abs(mid));
  if (rhs) {
    e.rhs = static_cast<long double>(*rhs);
    margin = std::min(margin, *rhs - mid);
    scale = std::max(scale, abs(*rhs));
  } else {
    e.rhs = std::numeric_limits<long double>::infinity();
  }
  e.holds = margin > 0;
  e.margin = static_cast<long double>(margin);
  e.rel_margin = scale > 0 ? static_cast<long double>(margin / scale) : 0.0L;
  return e;
}

// Digits resolving e^{-4 d} against O(1) terms, or e^{-2 a} relative slack at large a.
unsigned sandwich_digits(double a) { return digits_for_steepness(a) + 10; }

// Digits for closed forms in d up to d_max: the slacks are e^{-16 d / 3} relative.
unsigned chain_digits(double d_max) { return 30u + static_cast<unsigned>(std::ceil(1.1 * 16 * d_max / 3 / kLn10)); }

// Bounds entering the b02 argument.
Mp f1_upper_large(const Mp& a1) { return exp(a1 / 4) * (a1 - P2()) / (2 * P2()); }
Mp f2_lower_high(const Mp& a2) { return 15 * exp(3 * a2 / 16) * (65 * a2 - 272 * P()) / (8008 * P()); }
Mp f2_lower_mid(const Mp& a2) { return 3 * exp(3 * a2 / 16) * (65 * a2 - 272 * P()) / (1600 * P()); }
Mp f1_upper_small(const Mp& d1) {
  return (-1 + q(1427, 100) * exp(-4 * d1) + 2 * exp(-d1)) / (1 + q(101, 50) * exp(-4 * d1) - 2 * exp(-d1));
}
Mp f2_lower_small(const Mp& d2) {
  return (-1 + q(371, 200) * exp(-4 * d2) + 2 * exp(-d2)) / (1 + q(99, 50) * exp(-4 * d2) - 2 * exp(-d2));
}
Mp b02_final(const Mp& d) { return q(1529, 50) * exp(-d) - q(599, 25) + q(767, 200) * exp(4 * d / 3); }

// Bounds entering the slope argument.
Mp f1_slope_lower_large(const Mp& a1) { return (a1 - 2) * exp(-a1 / 4); }
Mp f2_upper_large(const Mp& a2) { return 2 * (1 + Mp(kEps)) * exp(-a2 / 4); }
Mp f1_slope_lower_small(const Mp& d1) {
  return (-q(65, 8) * exp(-4 * d1) + 2 * exp(-d1)) / (q(65, 8) * exp(-4 * d1) + 2 * exp(-d1));
}
// Upper bound on f2(-1) / f2(1); the numerator uses the upper theta~(-1) bound.
Mp f2_upper_small(const Mp& d2) {
  return (1 + q(101, 50) * exp(-4 * d2) - 2 * exp(-d2)) / (1 + q(99, 50) * exp(-4 * d2) + 2 * exp(-d2));
}
Mp slope_expanded(const Mp& d) {
  return -q(65, 2) * exp(-28 * d / 3) - q(1633, 100) * exp(-16 * d / 3) + 8 * exp(-7 * d / 3);
}
Mp slope_final(const Mp& d) { return 8 - q(1633, 100) * exp(-3 * d) - q(65, 2) * exp(-7 * d); }

struct Nodes {
  ThetaEval<Mp> m, z, p;
};
Nodes theta_nodes(const Mp& a) {
  const Mp c = P() / a;
  return {theta_tilde(c, Mp(-1), 1), theta_tilde(c, Mp(0), 1), theta_tilde(c, Mp(1), 1)};
}

void require_beta(double beta, const char* who) {
  if (!(beta * beta * 3 >= 1 - kRegionTol) || !std::isfinite(beta)) {
    throw std::invalid_argument(std::string(who) + ": need beta >= 1/sqrt(3)");
  }
}

bool ge(double x, double bound) { return x >= bound * (1 - kRegionTol); }
bool le(double x, double bound) { return x <= bound * (1 + kRegionTol); }

unsigned region_digits(double a1, double beta) { return plan_precision(a1, beta).node_digits + 10; }

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi >= lo) || n < 1) throw std::invalid_argument("geometric_grid: need 0 < lo <= hi, n >= 1");
  if (n == 1) return {lo};
  std::vector<double> g(n);
  const double r = std::log(hi / lo);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(r * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<BoundLedgerEntry> bounds_large_a(double a) {
  if (!(a >= kPi2) || !std::isfinite(a)) throw std::domain_error("bounds_large_a: need a >= pi^2");
  PrecisionGuard guard(sandwich_digits(a));
  const Mp A(a), s = sqrt(P() / A);
  const Nodes n = theta_nodes(A);
  const Mp e4 = exp(-A / 4), e16 = exp(-A / 16), eps(kEps), eps2(kEps2), eps3(kEps3);
  const Mp k = A / (2 * P2());
  const std::string region = "a>=pi2";
  return {
      make_entry("A.large.theta(-1)", region, "a", a, 0, 2 * e4, s * n.m.value, 2 * (1 + eps) * e4),
      make_entry("A.large.theta(0)", region, "a", a, 0, e16, s * n.z.value, (1 + eps2) * e16),
      make_entry("A.large.theta(1)", region, "a", a, 0, Mp(1), s * n.p.value, 1 + eps),
      make_entry("A.large.dtheta(-1)", region, "a", a, 0, k * (A - 2) * e4, s * n.m.derivs[0], k * (A - 2 + eps) * e4),
      make_entry("A.large.dtheta(0)", region, "a", a, 0, A * e16 * (1 - eps3) / (4 * P()), s * n.z.derivs[0],
                 A * e16 / (4 * P())),
      make_entry("A.large.dtheta(1)", region, "a", a, 0, (1 - eps2) * k, s * n.p.derivs[0], k),
  };
}

std::vector<BoundLedgerEntry> bounds_small_a(double a) {
  if (!(a > 0) || !(a <= kPi2)) throw std::domain_error("bounds_small_a: need 0 < a <= pi^2");
  PrecisionGuard guard(sandwich_digits(a));
  const Mp A(a), d = P2() / A, x = exp(-d), y = exp(-4 * d);
  const Nodes n = theta_nodes(A);
  const std::string region = "a<=pi2";
  return {
      make_entry("A.small.theta(-1)", region, "a", a, 0, 1 - 2 * x + q(99, 50) * y, n.m.value, 1 - 2 * x + q(101, 50) * y),
      make_entry("A.small.theta(0)", region, "a", a, 0, 1 - q(101, 50) * y, n.z.value, 1 - q(99, 50) * y),
      make_entry("A.small.theta(1)", region, "a", a, 0, 1 + 2 * x + q(99, 50) * y, n.p.value, 1 + 2 * x + q(101, 50) * y),
      make_entry("A.small.dtheta(-1)", region, "a", a, 0, 2 * x - q(65, 8) * y, n.m.derivs[0], 2 * x - q(63, 8) * y),
      make_entry("A.small.dtheta(0)", region, "a", a, 0, 2 * x - y / 8, n.z.derivs[0], 2 * x + y / 8),
      make_entry("A.small.dtheta(1)", region, "a", a, 0, 2 * x + q(63, 8) * y, n.p.derivs[0], 2 * x + q(65, 8) * y),
  };
}

std::string region_name(B02Region r) {
  switch (r) {
    case B02Region::LargeA1: return "a1>=pi2";
    case B02Region::MidHighA2: return "a1<=pi2,a2>=272pi/65";
    case B02Region::MidLowA2: return "a1<=pi2,pi2<=a2<=272pi/65";
    case B02Region::SmallA2: return "a2<=pi2";
  }
  return "";
}

std::string region_name(SlopeRegion r) {
  switch (r) {
    case SlopeRegion::LargeA1: return "a1>=pi2";
    case SlopeRegion::Mid: return "a1<=pi2,a2>=pi2";
    case SlopeRegion::SmallA2: return "a2<=pi2";
  }
  return "";
}

std::vector<B02Region> b02_regions(double a1, double a2) {
  std::vector<B02Region> out;
  if (ge(a1, kPi2)) out.push_back(B02Region::LargeA1);
  if (le(a1, kPi2) && ge(a2, kThreshold)) out.push_back(B02Region::MidHighA2);
  if (le(a1, kPi2) && ge(a2, kPi2) && le(a2, kThreshold)) out.push_back(B02Region::MidLowA2);
  if (le(a2, kPi2)) out.push_back(B02Region::SmallA2);
  return out;
}

std::vector<SlopeRegion> slope_regions(double a1, double a2) {
  std::vector<SlopeRegion> out;
  if (ge(a1, kPi2)) out.push_back(SlopeRegion::LargeA1);
  if (le(a1, kPi2) && ge(a2, kPi2)) out.push_back(SlopeRegion::Mid);
  if (le(a2, kPi2)) out.push_back(SlopeRegion::SmallA2);
  return out;
}

BoundLedgerEntry b02_region_check(double a1, double beta) {
  require_beta(beta, "b02_region_check");
  if (!(a1 > 0) || !std::isfinite(a1)) throw std::invalid_argument("b02_region_check: need a1 > 0");
  return b02_region_check(a1, beta, b02_regions(a1, 4 * beta * beta * a1).front());
}

BoundLedgerEntry b02_region_check(double a1, double beta, B02Region region) {
  require_beta(beta, "b02_region_check");
  if (!(a1 > 0) || !std::isfinite(a1)) throw std::invalid_argument("b02_region_check: need a1 > 0");
  const double a2d = 4 * beta * beta * a1;
  const auto applicable = b02_regions(a1, a2d);
  if (std::find(applicable.begin(), applicable.end(), region) == applicable.end()) {
    throw std::invalid_argument("b02_region_check: point outside the requested region");
  }
  PrecisionGuard guard(region_digits(a1, beta));
  const Mp A1(a1), Be(beta), A2 = 4 * Be * Be * A1, d1 = P2() / A1, d2 = P2() / A2;
  const Nodes f1 = theta_nodes(A1), f2 = theta_nodes(A2);
  const Mp direct = (f2.z.derivs[0] - f2.z.value) / f2.m.value - (2 * f1.p.derivs[0] - f1.p.value) / f1.m.value;
  Mp bound;
  switch (region) {
    case B02Region::LargeA1: bound = f2_lower_high(A2) - f1_upper_large(A1); break;
    case B02Region::MidHighA2: bound = f2_lower_high(A2) - f1_upper_small(d1); break;
    case B02Region::MidLowA2: bound = f2_lower_mid(A2) - f1_upper_small(d1); break;
    case B02Region::SmallA2: bound = f2_lower_small(d2) - f1_upper_small(d1); break;
  }
  auto e = make_entry("B.b02", region_name(region), "a1", a1, beta, Mp(0), bound, direct);
  e.holds = e.holds && build_magic<Mp>(A1, Be).D > 0;
  return e;
}

BoundLedgerEntry slope_region_check(double a1, double beta) {
  require_beta(beta, "slope_region_check");
  if (!(a1 > 0) || !std::isfinite(a1)) throw std::invalid_argument("slope_region_check: need a1 > 0");
  return slope_region_check(a1, beta, slope_regions(a1, 4 * beta * beta * a1).front());
}

BoundLedgerEntry slope_region_check(double a1, double beta, SlopeRegion region) {
  require_beta(beta, "slope_region_check");
  if (!(a1 > 0) || !std::isfinite(a1)) throw std::invalid_argument("slope_region_check: need a1 > 0");
  const double a2d = 4 * beta * beta * a1;
  const auto applicable = slope_regions(a1, a2d);
  if (std::find(applicable.begin(), applicable.end(), region) == applicable.end()) {
    throw std::invalid_argument("slope_region_check: point outside the requested region");
  }
  PrecisionGuard guard(region_digits(a1, beta));
  const Mp A1(a1), Be(beta), A2 = 4 * Be * Be * A1, d1 = P2() / A1, d2 = P2() / A2;
  const Nodes f1 = theta_nodes(A1), f2 = theta_nodes(A2);
  const Mp direct = f1.m.derivs[0] / f1.p.derivs[0] - f2.m.value / f2.p.value;
  Mp bound;
  switch (region) {
    case SlopeRegion::LargeA1: bound = f1_slope_lower_large(A1) - f2_upper_large(A2); break;
    case SlopeRegion::Mid: bound = f1_slope_lower_small(d1) - f2_upper_large(A2); break;
    case SlopeRegion::SmallA2: bound = f1_slope_lower_small(d1) - f2_upper_small(d2); break;
  }
  return make_entry("C.slope", region_name(region), "a1", a1, beta, Mp(0), bound, direct);
}

std::string expr_name(BoundExpr e) {
  switch (e) {
    case BoundExpr::F1RatioUpperLargeA: return "f1_ratio_upper_large_a";
    case BoundExpr::F2RatioLowerHighA: return "f2_ratio_lower_high_a";
    case BoundExpr::F2RatioLowerMidA: return "f2_ratio_lower_mid_a";
    case BoundExpr::F1RatioUpperSmallA: return "f1_ratio_upper_small_a";
    case BoundExpr::F2RatioLowerSmallA: return "f2_ratio_lower_small_a";
    case BoundExpr::F1SlopeRatioLowerLargeA: return "f1_slope_ratio_lower_large_a";
    case BoundExpr::F2RatioUpperLargeA: return "f2_ratio_upper_large_a";
    case BoundExpr::F1SlopeRatioLowerSmallA: return "f1_slope_ratio_lower_small_a";
    case BoundExpr::F2RatioUpperSmallA: return "f2_ratio_upper_small_a";
    case BoundExpr::B02FinalQuantity: return "b02_final_quantity";
    case BoundExpr::SlopeFinalQuantity: return "slope_final_quantity";
  }
  return "";
}

bool expr_increasing(BoundExpr e) {
  switch (e) {
    case BoundExpr::F1SlopeRatioLowerLargeA:
    case BoundExpr::F2RatioUpperLargeA:
    case BoundExpr::F1SlopeRatioLowerSmallA:
    case BoundExpr::F2RatioUpperSmallA:
      return false;
    default:
      return true;
  }
}

namespace {

enum class Domain { LargeA, SmallA, DAtLeastOne };

Domain expr_domain(BoundExpr e) {
  switch (e) {
    case BoundExpr::F1RatioUpperLargeA:
    case BoundExpr::F2RatioLowerHighA:
    case BoundExpr::F2RatioLowerMidA:
    case BoundExpr::F1SlopeRatioLowerLargeA:
    case BoundExpr::F2RatioUpperLargeA:
      return Domain::LargeA;
    case BoundExpr::B02FinalQuantity:
    case BoundExpr::SlopeFinalQuantity:
      return Domain::DAtLeastOne;
    default:
      return Domain::SmallA;
  }
}

Mp expr_mp(BoundExpr e, const Mp& x) {
  switch (e) {
    case BoundExpr::F1RatioUpperLargeA: return f1_upper_large(x);
    case BoundExpr::F2RatioLowerHighA: return f2_lower_high(x);
    case BoundExpr::F2RatioLowerMidA: return f2_lower_mid(x);
    case BoundExpr::F1RatioUpperSmallA: return f1_upper_small(P2() / x);
    case BoundExpr::F2RatioLowerSmallA: return f2_lower_small(P2() / x);
    case BoundExpr::F1SlopeRatioLowerLargeA: return f1_slope_lower_large(x);
    case BoundExpr::F2RatioUpperLargeA: return f2_upper_large(x);
    case BoundExpr::F1SlopeRatioLowerSmallA: return f1_slope_lower_small(P2() / x);
    case BoundExpr::F2RatioUpperSmallA: return f2_upper_small(P2() / x);
    case BoundExpr::B02FinalQuantity: return b02_final(x);
    case BoundExpr::SlopeFinalQuantity: return slope_final(x);
  }
  return Mp(0);
}

unsigned expr_digits(BoundExpr e, double lo, double hi) {
  switch (expr_domain(e)) {
    case Domain::SmallA: return sandwich_digits(lo);
    case Domain::LargeA: return 30u + static_cast<unsigned>(std::ceil(hi / 4 / kLn10));
    case Domain::DAtLeastOne: return 30u + static_cast<unsigned>(std::ceil(7 * hi / kLn10));
  }
  return 50;
}

void check_domain(BoundExpr e, double x) {
  bool ok = std::isfinite(x);
  switch (expr_domain(e)) {
    case Domain::LargeA: ok = ok && ge(x, kPi2); break;
    case Domain::SmallA: ok = ok && x > 0 && le(x, kPi2); break;
    case Domain::DAtLeastOne: ok = ok && ge(x, 1); break;
  }
  if (!ok) throw std::invalid_argument("bound expression evaluated outside its domain");
}

}  // namespace

long double expr_value(BoundExpr e, double x) {
  check_domain(e, x);
  PrecisionGuard guard(expr_digits(e, x, x));
  return static_cast<long double>(expr_mp(e, Mp(x)));
}

BoundLedgerEntry monotonicity_entry(BoundExpr e, const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("monotonicity_entry: need at least two grid points");
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("monotonicity_entry: grid must be sorted");
  check_domain(e, grid.front());
  check_domain(e, grid.back());
  PrecisionGuard guard(expr_digits(e, grid.front(), grid.back()));
  const bool inc = expr_increasing(e);
  Mp prev = expr_mp(e, Mp(grid[0]));
  Mp worst;
  bool first = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Mp cur = expr_mp(e, Mp(grid[i]));
    const Mp step = inc ? cur - prev : prev - cur;
    if (first || step < worst) worst = step;
    first = false;
    prev = cur;
  }
  return make_entry("monotone." + expr_name(e), inc ? "increasing" : "decreasing", "x", grid.front(), 0, Mp(0), worst,
                    std::nullopt);
}

bool monotonicity_scan(BoundExpr e, const std::vector<double>& grid) { return monotonicity_entry(e, grid).holds; }

std::vector<BoundLedgerEntry> b02_reduced_chains(int grid_size, double a_max, double d_max) {
  if (grid_size < 2) throw std::invalid_argument("b02_reduced_chains: grid_size must be >= 2");
  std::vector<BoundLedgerEntry> out;
  {
    // a1 >= pi^2: 15 e^{3 a2/16}(65 a2 - 272 pi)/(8008 pi) at a2 = 4 a1/3, minus the f1 bound.
    const auto g = geometric_grid(kPi2, a_max, grid_size);
    PrecisionGuard guard(30u + static_cast<unsigned>(std::ceil(a_max / 4 / kLn10)));
    const std::string region = region_name(B02Region::LargeA1);
    for (double a : g) {
      const Mp A(a);
      const Mp v = exp(A / 4) * (-19 * P2() + 13 * A * (25 * P() - 77)) / (2002 * P2());
      out.push_back(make_entry("B.reduced", region, "a1", a, 0, Mp(0), v, std::nullopt));
    }
  }
  {
    PrecisionGuard guard(50);
    out.push_back(make_entry("B.reduced", region_name(B02Region::MidHighA2), "a1", kPi2, 0, Mp(0), -f1_upper_small(Mp(1)),
                             std::nullopt));
  }
  {
    // pi^2 <= a2 <= 272 pi/65, d1 >= 4 pi^2/(3 a2): a difference of increasing functions
    // of a2, bracketed on each cell by f(left) - g(right).
    std::vector<double> g(grid_size);
    for (int i = 0; i < grid_size; ++i) g[i] = kPi2 + (kThreshold - kPi2) * i / (grid_size - 1);
    g.back() = kThreshold;
    PrecisionGuard guard(50);
    const std::string region = region_name(B02Region::MidLowA2);
    // Cells whose bracket is not positive are bisected; the entry keeps the
    // smallest bracket over the accepted subcells.
    std::function<Mp(const Mp&, const Mp&, int)> bracket = [&](const Mp& lo, const Mp& hi, int depth) -> Mp {
      const Mp v = f2_lower_mid(lo) - f1_upper_small(4 * P2() / (3 * hi));
      if (v > 0 || depth == 0) return v;
      const Mp mid = (lo + hi) / 2;
      return std::min(bracket(lo, mid, depth - 1), bracket(mid, hi, depth - 1));
    };
    for (int i = 0; i + 1 < grid_size; ++i) {
      const Mp v = bracket(Mp(g[i]), Mp(g[i + 1]), kMaxBisections);
      out.push_back(make_entry("B.reduced.bracket", region, "a2", g[i], 0, Mp(0), v, std::nullopt));
    }
  }
  {
    // a2 <= pi^2 with d1 >= 4 d2 / 3.
    const auto g = geometric_grid(1, d_max, grid_size);
    PrecisionGuard guard(chain_digits(d_max));
    const std::string region = region_name(B02Region::SmallA2);
    for (double d : g) {
      const Mp D(d);
      out.push_back(make_entry("B.reduced.finalline", region, "d2", d, 0, Mp(0), f2_lower_small(D) - f1_upper_small(4 * D / 3), std::nullopt));
      out.push_back(make_entry("B.reduced.final_quantity", region, "d2", d, 0, Mp(0), b02_final(D), std::nullopt));
    }
  }
  return out;
}

std::vector<BoundLedgerEntry> slope_reduced_chains(int grid_size, double a_max, double d_max) {
  if (grid_size < 2) throw std::invalid_argument("slope_reduced_chains: grid_size must be >= 2");
  std::vector<BoundLedgerEntry> out;
  {
    // a1 >= pi^2: e^{-a1/4}(a1 - 2 - 2(1 + eps) e^{-a1/12}) > e^{-a1/4}(a1 - 4) > 0.
    const auto g = geometric_grid(kPi2, a_max, grid_size);
    PrecisionGuard guard(30u + static_cast<unsigned>(std::ceil(a_max / 4 / kLn10)));
    const std::string region = region_name(SlopeRegion::LargeA1);
    for (double a : g) {
      const Mp A(a), e = exp(-A / 4);
      out.push_back(make_entry("C.reduced", region, "a1", a, 0, Mp(0), e * (A - 4),
                               e * (A - 2 - 2 * (1 + Mp(kEps)) * exp(-A / 12))));
    }
  }
  {
    PrecisionGuard guard(50);
    out.push_back(make_entry("C.reduced", region_name(SlopeRegion::Mid), "a1", kPi2, 0, Mp(0),
                             f1_slope_lower_small(Mp(1)) - f2_upper_large(P2()), std::nullopt));
  }
  {
    const auto g = geometric_grid(1, d_max, grid_size);
    PrecisionGuard guard(chain_digits(d_max));
    const std::string region = region_name(SlopeRegion::SmallA2);
    for (double d : g) {
      const Mp D(d);
      out.push_back(make_entry("C.reduced.lastline", region, "d2", d, 0, Mp(0), f1_slope_lower_small(4 * D / 3) - f2_upper_small(D),
                               std::nullopt));
      out.push_back(make_entry("C.reduced.expanded", region, "d2", d, 0, Mp(0), slope_expanded(D), std::nullopt));
    }
  }
  return out;
}

namespace {

// Van der Corput sequence in base 2; the first value is 0.
double vdc(int i) {
  double v = 0, f = 0.5;
  for (unsigned n = static_cast<unsigned>(i); n; n >>= 1, f /= 2) {
    if (n & 1u) v += f;
  }
  return v;
}

struct Sample {
  double a1, beta;
};

// a2 / a1 = s in [s_lo, s_hi], spread by the van der Corput sequence.
Sample from_a2(double a2, double s_lo, double s_hi, int i) {
  const double s = s_lo + (s_hi - s_lo) * vdc(i);
  return {a2 / s, std::sqrt(s / 4)};
}

std::vector<Sample> region_samples(int region_kind, const LedgerOptions& opt) {
  // 0: a1 >= pi^2; 1: a1 <= pi^2, a2 >= lo2 (lo2 = 272 pi/65 or pi^2); 2: pi^2 <= a2 <= 272 pi/65;
  // 3: a2 <= pi^2; 4: a1 <= pi^2, a2 >= pi^2.
  const int n = opt.grid_size;
  const double s_min = 4.0 / 3, s_max = 4 * opt.beta_max * opt.beta_max;
  std::vector<Sample> out;
  out.reserve(n);
  switch (region_kind) {
    case 0: {
      const auto g = geometric_grid(kPi2, opt.a_max, n);
      for (int i = 0; i < n; ++i) out.push_back({g[i], std::sqrt((s_min + (s_max - s_min) * vdc(i)) / 4)});
      break;
    }
    case 1:
    case 4: {
      const double lo2 = region_kind == 1 ? kThreshold : kPi2;
      const auto g = geometric_grid(lo2, s_max * kPi2, n);
      for (int i = 0; i < n; ++i) out.push_back(from_a2(g[i], std::max(s_min, g[i] / kPi2), s_max, i));
      break;
    }
    case 2: {
      for (int i = 0; i < n; ++i) {
        const double a2 = n == 1 ? kPi2 : kPi2 + (kThreshold - kPi2) * i / (n - 1);
        out.push_back(from_a2(a2, s_min, s_max, i));
      }
      break;
    }
    case 3: {
      const auto g = geometric_grid(opt.a_min, kPi2, n);
      for (int i = 0; i < n; ++i) out.push_back(from_a2(g[i], s_min, s_max, i));
      break;
    }
  }
  // Keep beta on the admissible side of 1/sqrt(3) after rounding.
  for (auto& p : out) p.beta = std::max(p.beta, 1 / std::sqrt(3.0));
  return out;
}

template <typename Fn>
void append_parallel(std::vector<BoundLedgerEntry>& out, std::size_t count, Fn&& fn) {
  auto parts = parallel_map<std::vector<BoundLedgerEntry>>(count, fn);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
}

}  // namespace

std::vector<BoundLedgerEntry> run_ledger(Suite suite, const LedgerOptions& opt) {
  if (opt.grid_size < 2) throw std::invalid_argument("run_ledger: grid_size must be >= 2");
  if (!(opt.a_min > 0 && opt.a_min < kPi2 && opt.a_max > kPi2 && opt.beta_max * opt.beta_max * 3 > 1)) {
    throw std::invalid_argument("run_ledger: need 0 < a_min < pi^2 < a_max and beta_max > 1/sqrt(3)");
  }
  const int n = opt.grid_size;
  const double d_max = kPi2 / opt.a_min;
  const double a2_max = 4 * opt.beta_max * opt.beta_max * opt.a_max;
  std::vector<BoundLedgerEntry> out;

  if (suite == Suite::A || suite == Suite::All) {
    const auto big = geometric_grid(kPi2, opt.a_max, n);
    const auto small = geometric_grid(opt.a_min, kPi2, n);
    append_parallel(out, big.size(), [&](std::size_t i) { return bounds_large_a(big[i]); });
    append_parallel(out, small.size(), [&](std::size_t i) { return bounds_small_a(small[i]); });
  }
  if (suite == Suite::B || suite == Suite::All) {
    const B02Region regions[] = {B02Region::LargeA1, B02Region::MidHighA2, B02Region::MidLowA2, B02Region::SmallA2};
    for (int k = 0; k < 4; ++k) {
      const auto pts = region_samples(k, opt);
      append_parallel(out, pts.size(), [&](std::size_t i) {
        return std::vector<BoundLedgerEntry>{b02_region_check(pts[i].a1, pts[i].beta, regions[k])};
      });
    }
    const auto chains = b02_reduced_chains(n, opt.a_max, d_max);
    out.insert(out.end(), chains.begin(), chains.end());
    const auto big1 = geometric_grid(kPi2, opt.a_max, n), big2 = geometric_grid(kPi2, a2_max, n);
    const auto small = geometric_grid(opt.a_min, kPi2, n), dg = geometric_grid(1, d_max, n);
    out.push_back(monotonicity_entry(BoundExpr::F1RatioUpperLargeA, big1));
    out.push_back(monotonicity_entry(BoundExpr::F2RatioLowerHighA, big2));
    out.push_back(monotonicity_entry(BoundExpr::F2RatioLowerMidA, big2));
    out.push_back(monotonicity_entry(BoundExpr::F1RatioUpperSmallA, small));
    out.push_back(monotonicity_entry(BoundExpr::F2RatioLowerSmallA, small));
    out.push_back(monotonicity_entry(BoundExpr::B02FinalQuantity, dg));
  }
  if (suite == Suite::C || suite == Suite::All) {
    const SlopeRegion regions[] = {SlopeRegion::LargeA1, SlopeRegion::Mid, SlopeRegion::SmallA2};
    const int kinds[] = {0, 4, 3};
    for (int k = 0; k < 3; ++k) {
      const auto pts = region_samples(kinds[k], opt);
      append_parallel(out, pts.size(), [&](std::size_t i) {
        return std::vector<BoundLedgerEntry>{slope_region_check(pts[i].a1, pts[i].beta, regions[k])};
      });
    }
    const auto chains = slope_reduced_chains(n, opt.a_max, d_max);
    out.insert(out.end(), chains.begin(), chains.end());
    const auto big1 = geometric_grid(kPi2, opt.a_max, n), big2 = geometric_grid(kPi2, a2_max, n);
    const auto small = geometric_grid(opt.a_min, kPi2, n), dg = geometric_grid(1, d_max, n);
    out.push_back(monotonicity_entry(BoundExpr::F1SlopeRatioLowerLargeA, big1));
    out.push_back(monotonicity_entry(BoundExpr::F2RatioUpperLargeA, big2));
    out.push_back(monotonicity_entry(BoundExpr::F1SlopeRatioLowerSmallA, small));
    out.push_back(monotonicity_entry(BoundExpr::F2RatioUpperSmallA, small));
    out.push_back(monotonicity_entry(BoundExpr::SlopeFinalQuantity, dg));
  }
  return out;
}

}  // namespace torusopt
