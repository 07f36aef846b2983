#include <doctest.h>

#include <cmath>
#include <random>

#include "torusopt/energy.hpp"
#include "torusopt/magic.hpp"
#include "oracles.hpp"

using namespace torusopt;
using V = Vec2<double>;

namespace {

const double kPi = 3.141592653589793;
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Node data from the oracle Chebyshev series: {f(t), f'(t)}.
std::vector<Mp> node(const Mp& a, double t) { return oracle::theta_tilde_mp(pi<Mp>() / a, Mp(t), 1, 80); }

}  // namespace

// At large a2 the node values are far below |A|..|D|, so the identities are
// checked in MPFR against independently summed series.
TEST_CASE("build_magic interpolates F~ at both nodes") {
  PrecisionGuard guard(100);
  for (double beta : {kInvSqrt3, 1.0, 1.7}) {
    for (double a1 : {0.7, 2.0, 9.0}) {
      const auto mf = build_magic(Mp(a1), Mp(beta));
      const Mp a2 = 4 * Mp(beta) * Mp(beta) * Mp(a1);
      const auto f1m = node(Mp(a1), -1), f1p = node(Mp(a1), 1);
      const auto f2m = node(a2, -1), f2z = node(a2, 0);
      INFO("a1=" << a1 << " beta=" << beta);
      CHECK(abs(mf.a2 - a2) / a2 < Mp("1e-90"));
      CHECK(abs(mf.B - f1p[1] * f2m[0]) / mf.B < Mp("1e-60"));
      CHECK(abs(mf.C - f1m[0] * f2z[1]) / mf.C < Mp("1e-60"));
      // g~(-1, 0) = F~(-1, 0) and g~(1, -1) = F~(1, -1).
      const Mp v0 = f1m[0] * f2z[0], v1 = f1p[0] * f2m[0];
      CHECK(abs(mf.A - mf.B - v0) / v0 < Mp("1e-50"));
      CHECK(abs(mf.A + mf.B - mf.C + mf.D - v1) / v1 < Mp("1e-50"));
      const auto res = interp_residuals(mf);
      CHECK(res[0] <= Mp(kInterpTol));
      CHECK(res[1] <= Mp(kInterpTol));
      // Tangency in t2 at (-1, 0).
      CHECK(mf.nodes.f1m * mf.nodes.d2z - mf.C == 0);
    }
  }
  CHECK_THROWS_AS(build_magic(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_magic(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("interpolation residuals in double at moderate steepness") {
  const auto res = interp_residuals(build_magic(1.0, 1.0));
  CHECK(res[0] <= kInterpTol);
  CHECK(res[1] <= kInterpTol);
}

TEST_CASE("D matches the ratio form") {
  PrecisionGuard guard(100);
  for (double beta : {kInvSqrt3, 1.0, 2.0}) {
    for (double a1 : {1.0, 4.0, kPi * kPi, 20.0}) {
      const auto mf = build_magic(Mp(a1), Mp(beta));
      const auto& n = mf.nodes;
      const Mp ratio = n.f1m * n.f2m * ((n.d2z - n.f2z) / n.f2m - (2 * n.d1p - n.f1p) / n.f1m);
      INFO("a1=" << a1 << " beta=" << beta);
      CHECK(abs((ratio - mf.D) / mf.D) <= Mp("1e-40"));
    }
  }
}

TEST_CASE("D is positive at the threshold aspect ratio") {
  CHECK(build_magic(kPi * kPi, kInvSqrt3).D > 0);
  const auto mf = build_magic(10.0, kInvSqrt3);
  CHECK(mf.D > 0);
  CHECK(mf.D < 0.1 * mf.C);
}

TEST_CASE("raw and Chebyshev evaluation agree") {
  const auto mf = build_magic(1.3, 0.9);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 100; ++i) {
    const V t(u(rng), u(rng));
    CHECK(std::abs(eval_magic(mf, t) - eval_magic_cheb(mf, t)) <= 1e-14 * (std::abs(mf.A) + std::abs(mf.B) + std::abs(mf.C) + std::abs(mf.D)));
  }
  const auto c = mf.cheb();
  CHECK(c.size() == 4);
  CHECK(c.at(FreqIndex(0, 0)) == mf.A + mf.D / 2);
  CHECK(c.at(FreqIndex(0, 2)) == mf.D / 2);
  CHECK(std::abs(eval_magic(mf, V(-1, 0)) - potential_tilde(GaussParam<double>(1.3, RectLattice<double>(1, 1.8)), V(-1, 0))) <
        1e-12 * eval_magic(mf, V(-1, 0)));
}

TEST_CASE("hermite_interpolant") {
  const auto one = hermite_interpolant(1.0, 1.0, 0.0);
  for (double t : {-1.0, -0.3, 0.0, 0.6, 1.0}) CHECK(one(t) == 1.0);
  const auto id = hermite_interpolant(-1.0, 0.0, 1.0);
  for (double t : {-1.0, -0.3, 0.0, 0.6, 1.0}) CHECK(id(t) == doctest::Approx(t).epsilon(1e-15));

  // theta~ lies above its interpolant: the error term has a nonnegative third derivative.
  PrecisionGuard guard(50);
  for (double a2 : {0.5, 3.0, 20.0, 200.0}) {
    const Mp c = pi<Mp>() / Mp(a2);
    const auto e0 = theta_tilde(c, Mp(0), 1);
    const auto q = hermite_interpolant(theta_tilde(c, Mp(-1), 0).value, e0.value, e0.derivs[0]);
    bool ok = true;
    for (int i = 0; i <= 1000; ++i) {
      const Mp t = Mp(-1) + Mp(i) / 500;
      ok = ok && theta_tilde(c, t, 0).value - q(t) >= 0;
    }
    INFO("a2=" << a2);
    CHECK(ok);
  }
}

TEST_CASE("CPSD margins") {
  for (double beta : {0.4, kInvSqrt3, 1.0, 3.0}) {
    for (double a1 : {0.3, 1.0, 5.0, 30.0}) {
      const auto mf = build_magic(a1, beta);
      CHECK(mf.B > 0);
      CHECK(mf.C > 0);
    }
  }
  const auto mf = build_magic(1.0, 1.0);
  CHECK(mf.D > 0);
  CHECK(check_cpsd(mf) > 0);
  CHECK(check_cpsd(mf) == std::min({mf.B, mf.C, mf.D}));
}

TEST_CASE("vanishing rule") {
  CHECK(check_vanishing(build_magic(1.0, 1.0)));
  CHECK_FALSE(check_vanishing(std::map<FreqIndex, double>{{FreqIndex(1, 2), 0.5}}));
  CHECK_FALSE(check_vanishing(std::map<FreqIndex, double>{{FreqIndex(2, 0), 0.5}}));
  CHECK(check_vanishing(std::map<FreqIndex, double>{{FreqIndex(2, 0), 0.0}, {FreqIndex(0, 0), 3.0}}));
}

TEST_CASE("LP bound is sharp at the canonical configuration") {
  for (double beta : {kInvSqrt3, 1.0, std::sqrt(3.0)}) {
    for (double a1 : {0.5, 2.0, 8.0}) {
      const auto mf = build_magic<long double>(a1, beta);
      const GaussParam<long double> p(a1, RectLattice<long double>(1, 2 * (long double)beta));
      const long double e = config_energy(canonical_config<long double>(beta, 2), p).energy_normalized;
      INFO("a1=" << a1 << " beta=" << beta);
      CHECK(std::abs(static_cast<double>((lp_bound(mf, 4) - e) / e)) <= 1e-10);
    }
  }
  const auto mf = build_magic(1.0, 1.0);
  CHECK(lp_bound(mf, 1) <= 0);
  CHECK_THROWS(lp_bound(mf, 0));
}

TEST_CASE("LP bound stays below random configurations") {
  const double a1 = 1.5, beta = 1.0;
  const auto mf = build_magic(a1, beta);
  const double bound = lp_bound(mf, 4);
  const GaussParam<double> p(a1, RectLattice<double>(1, 2 * beta));
  for (unsigned seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 100; ++k) {
      std::vector<V> pts;
      for (int i = 0; i < 4; ++i) pts.emplace_back(u(rng), 2 * beta * u(rng));
      CHECK(config_energy(Configuration<double>(pts, p.L), p).energy_normalized >= bound - 1e-12);
    }
  }
}

TEST_CASE("certify_stay_below in working precision") {
  const auto r = certify_stay_below(build_magic(1.0, std::sqrt(3.0)), 256);
  CHECK(r.verdict);
  CHECK(r.failed_clause.empty());
  CHECK(r.hessian_max_det < 0);
  CHECK(r.hessian_chain_ok);
  CHECK(r.hessian_max_det <= r.hessian_F_max_det);
  CHECK(r.grid_min >= -1e-9 * r.f11);
  CHECK(r.label == "numerical certificate");
  CHECK_THROWS(certify_stay_below(build_magic(1.0, 1.0), 32));
}

TEST_CASE("certify passes at and above the threshold aspect ratio") {
  for (double beta : {kInvSqrt3, 1.0, std::sqrt(3.0)}) {
    for (double a1 : {0.1, 1.0, 30.0}) {
      const auto r = certify(a1, beta, 128);
      INFO("a1=" << a1 << " beta=" << beta << " clause=" << r.failed_clause);
      CHECK(r.verdict);
      CHECK(r.cpsd_margin > 0);
      CHECK(r.sharpness_gap <= 1e-10);
      CHECK(r.cross_margin > 0);
      CHECK(r.t1_partial_min > 0);
    }
  }
}

TEST_CASE("certify does not claim optimality below the threshold") {
  int passes = 0;
  for (double a1 : {0.3, 1.0, 3.0, 10.0, 40.0}) passes += certify(a1, 0.5, 64).verdict ? 1 : 0;
  CHECK(passes < 5);
  const auto r = certify(10.0, 0.5, 64);
  CHECK_FALSE(r.verdict);
  CHECK(r.failed_clause == "cpsd");
  CHECK(r.D < 0);
}

TEST_CASE("cross margin matches the direct cross inequality") {
  for (double a1 : {0.5, 3.0, 25.0}) {
    const double beta = 1.2, a2 = 4 * beta * beta * a1;
    const double lhs = theta_tilde(kPi / a1, -1.0, 1).derivs[0] * theta_fourier(kPi / a2, 0.0);
    const double rhs = theta_tilde(kPi / a1, 1.0, 1).derivs[0] * theta_fourier(kPi / a2, 0.5);
    const auto r = certify(a1, beta, 64);
    CHECK((lhs > rhs) == (r.cross_margin > 0));
    CHECK(static_cast<double>(r.cross_margin) == doctest::Approx(1 - rhs / lhs).epsilon(1e-9));
  }
}

TEST_CASE("precision plan") {
  const auto easy = plan_precision(2.0, 1.0);
  CHECK(easy.grid_digits == 0);
  CHECK(easy.node_digits >= 30);
  CHECK(plan_precision(0.1, kInvSqrt3).node_digits > 150);
  CHECK(plan_precision(0.1, kInvSqrt3).grid_digits > 0);
  CHECK(plan_precision(50, 5).node_digits > 400);
  CHECK_THROWS(certify(-1, 1, 64));
  CHECK_THROWS(certify(1, 1, 10));
}

TEST_CASE("certificate margins do not depend on the thread count") {
  set_num_threads(1);
  const auto one = certify(2.0, 1.0, 128);
  set_num_threads(4);
  const auto four = certify(2.0, 1.0, 128);
  set_num_threads(0);
  CHECK(one.grid_min == four.grid_min);
  CHECK(one.hessian_max_det == four.hessian_max_det);
  CHECK(one.boundary_margins == four.boundary_margins);
  CHECK(one.t1_partial_min == four.t1_partial_min);
}
