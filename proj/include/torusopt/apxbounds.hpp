#ifndef TORUSOPT_APXBOUNDS_HPP
#define TORUSOPT_APXBOUNDS_HPP

// Machine-checked ledgers for the theta bounds behind the positivity of D and
// the t1-slope inequality
//
//   f1'(-1) / f1'(1) > f2(-1) / f2(1).
//
// Suite A: two-sided bounds on theta~ and theta~' at t = -1, 0, 1, separately
// for a >= pi^2 and a <= pi^2 (d = pi^2 / a).
// Suite B: (f2'(0) - f2(0)) / f2(-1) - (2 f1'(1) - f1(1)) / f1(-1) > 0, by region.
// Suite C: the slope inequality above, by region.
//
// Every quantity is evaluated in MPFR, sized so the bound slacks (as small
// as e^{-4 d} or e^{-2 a} relative) are resolved. Regions are dense grids;
// the reduced one-variable chains use the monotonicity of their bounds to
// bracket between grid points.

#include <string>
#include <vector>

namespace torusopt {

/// lhs < mid < rhs (rhs = +inf for one-sided entries). Margins are in the
/// units of mid; rel_margin divides by the largest finite |lhs|, |mid|, |rhs|.
struct BoundLedgerEntry {
  std::string name;
  std::string region;
  std::string param_name;  // "a", "a1", "a2" or "d2"
  double param = 0;
  double beta = 0;  // 0 when the entry does not depend on beta
  long double lhs = 0, mid = 0, rhs = 0;
  bool holds = false;
  long double margin = 0;
  long double rel_margin = 0;
};

inline constexpr double kEps = 1.0 / 1000;
inline constexpr double kEps2 = 1.0 / 50;
inline constexpr double kEps3 = 1.0 / 40;

/// Six sandwiches for a >= pi^2, of sqrt(pi/a) theta~(pi/a; t) and its
/// t-derivative at t = -1, 0, 1.
std::vector<BoundLedgerEntry> bounds_large_a(double a);

/// Six sandwiches for 0 < a <= pi^2 in terms of e^{-d} and e^{-4 d}.
std::vector<BoundLedgerEntry> bounds_small_a(double a);

enum class B02Region { LargeA1, MidHighA2, MidLowA2, SmallA2 };
enum class SlopeRegion { LargeA1, Mid, SmallA2 };

/// All regions containing (a1, a2); points on a region boundary belong to both.
std::vector<B02Region> b02_regions(double a1, double a2);
std::vector<SlopeRegion> slope_regions(double a1, double a2);
std::string region_name(B02Region r);
std::string region_name(SlopeRegion r);

/// 0 < (region lower bound) < (direct value), with a2 = 4 beta^2 a1. The
/// first applicable region is used unless one is given. holds also requires
/// D > 0 from the magic function.
BoundLedgerEntry b02_region_check(double a1, double beta);
BoundLedgerEntry b02_region_check(double a1, double beta, B02Region region);

/// 0 < (region lower bound) < f1'(-1)/f1'(1) - f2(-1)/f2(1), evaluated directly.
BoundLedgerEntry slope_region_check(double a1, double beta);
BoundLedgerEntry slope_region_check(double a1, double beta, SlopeRegion region);

/// Closed-form bound expressions with a stated monotone direction.
enum class BoundExpr {
  F1RatioUpperLargeA,       // e^{a/4} (a - pi^2) / (2 pi^2), increasing, a >= pi^2
  F2RatioLowerHighA,        // 15 e^{3a/16} (65 a - 272 pi) / (8008 pi), increasing, a >= pi^2
  F2RatioLowerMidA,         // 3 e^{3a/16} (65 a - 272 pi) / (1600 pi), increasing, a >= pi^2
  F1RatioUpperSmallA,       // increasing in a, a <= pi^2
  F2RatioLowerSmallA,       // increasing in a, a <= pi^2
  F1SlopeRatioLowerLargeA,  // (a - 2) e^{-a/4}, decreasing, a >= pi^2
  F2RatioUpperLargeA,       // 2 (1 + eps) e^{-a/4}, decreasing, a >= pi^2
  F1SlopeRatioLowerSmallA,  // decreasing in a, a <= pi^2
  F2RatioUpperSmallA,       // decreasing in a, a <= pi^2
  B02FinalQuantity,         // 1529/50 e^{-d} - 599/25 + 767/200 e^{4d/3}, increasing in d >= 1
  SlopeFinalQuantity,       // 8 - 1633/100 e^{-3d} - 65/2 e^{-7d}, increasing in d >= 1
};

std::string expr_name(BoundExpr e);
bool expr_increasing(BoundExpr e);

/// Value of the expression at x (a, or d for the two final quantities).
long double expr_value(BoundExpr e, double x);

/// Entry whose mid is the smallest signed step in the stated direction over
/// consecutive grid points. Throws if the grid is unsorted or leaves the domain.
BoundLedgerEntry monotonicity_entry(BoundExpr e, const std::vector<double>& grid);
bool monotonicity_scan(BoundExpr e, const std::vector<double>& grid);

/// Reduced one-variable chains that finish each region argument.
std::vector<BoundLedgerEntry> b02_reduced_chains(int grid_size, double a_max, double d_max);
std::vector<BoundLedgerEntry> slope_reduced_chains(int grid_size, double a_max, double d_max);

enum class Suite { A, B, C, All };

struct LedgerOptions {
  int grid_size = 1000;
  double a_min = 0.05;            // smallest a (suite A) and a2 (suites B, C)
  double a_max = 100;             // largest a and a1
  double beta_max = 1.7320508075688772;
};

/// Entries in a fixed order, independent of the thread count.
std::vector<BoundLedgerEntry> run_ledger(Suite suite, const LedgerOptions& opt = {});

/// n points from lo to hi, geometric, with exact endpoints.
std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace torusopt

#endif  // TORUSOPT_APXBOUNDS_HPP
