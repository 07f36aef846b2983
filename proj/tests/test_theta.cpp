#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "torusopt/theta.hpp"

using torusopt::Mp;
using torusopt::PrecisionGuard;

namespace {

const double kPi = 3.141592653589793;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

std::vector<double> chebyshev_points(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = std::cos(kPi * i / (n - 1));
  return t;
}

const std::vector<double> kMonotoneC{0.05, 0.2, 1.0, 5.0, 20.0};

}  // namespace

TEST_CASE("theta_fourier matches a direct series") {
  CHECK(rel(torusopt::theta_fourier(1.0, 0.0), double(oracle::theta_direct(1.0L, 0.0L, 8))) < 1e-15);
  CHECK(rel(torusopt::theta_fourier(1.0, 0.5), double(oracle::theta_direct(1.0L, 0.5L, 8))) < 1e-15);
  CHECK(torusopt::theta_fourier(200.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("theta_gauss agrees with theta_fourier at single points") {
  CHECK(rel(torusopt::theta_gauss(1.0, 0.0), torusopt::theta_fourier(1.0, 0.0)) <= 1e-13);
  CHECK(rel(torusopt::theta_gauss(0.05, 0.25), torusopt::theta_fourier(0.05, 0.25)) <= 1e-13);
  // Single dominant image for tiny c.
  const double c = 1e-3;
  CHECK(rel(torusopt::theta_gauss(c, 0.0), 1.0 / std::sqrt(c)) < 1e-14);
}

TEST_CASE("representation agreement and symmetry on the log grid") {
  double worst = 0, worst_sym = 0;
  for (double c : log_grid(0.05, 50, 40)) {
    for (int i = 0; i < 64; ++i) {
      const double x = i / 64.0;
      const double f = torusopt::theta_fourier(c, x);
      worst = std::max(worst, rel(torusopt::theta_gauss(c, x), f));
      worst_sym = std::max(worst_sym, rel(torusopt::theta(c, -x), f));
      worst_sym = std::max(worst_sym, rel(torusopt::theta(c, 1 - x), f));
    }
  }
  CHECK(worst <= 1e-12);
  CHECK(worst_sym <= 1e-12);
}

TEST_CASE("theta_tilde endpoints reduce to theta at x = 0 and x = 1/2") {
  for (double c : {0.05, 0.3, 1.0, 7.0}) {
    CHECK(rel(torusopt::theta_tilde(c, 1.0, 0).value, torusopt::theta_fourier(c, 0.0)) < 1e-13);
    CHECK(rel(torusopt::theta_tilde(c, -1.0, 0).value, torusopt::theta_fourier(c, 0.5)) < 1e-12);
  }
}

TEST_CASE("theta_tilde values and derivatives against a high-precision oracle") {
  const std::vector<double> cs{0.05, 0.1, 0.2, 0.25, 0.4, 0.9, 1.0, 5.0, 50.0};
  const std::vector<double> ts{-1.0, -1 + 1e-9, -0.999, -0.7, -0.2, 0.0, 0.31, 0.8, 0.9999, 1.0};
  const double tol[5] = {1e-13, 1e-13, 1e-13, 1e-12, 1e-10};
  for (double c : cs) {
    for (double t : ts) {
      const auto got = torusopt::theta_tilde(c, t, 4);
      std::vector<Mp> ref;
      {
        PrecisionGuard guard(60);
        ref = oracle::theta_tilde_mp(Mp(c), Mp(t), 4, 50);
      }
      for (int j = 0; j <= 4; ++j) {
        const double r = static_cast<double>(ref[j]);
        const double g = j == 0 ? got.value : got.derivs[j - 1];
        INFO("c=" << c << " t=" << t << " order=" << j);
        if (std::abs(r) < 1e-290) {
          // Below the double range; the library may only flush to zero.
          CHECK(g >= 0);
          CHECK(g < 1e-280);
        } else {
          CHECK(rel(g, r) <= tol[j]);
        }
      }
    }
  }
}

TEST_CASE("theta_tilde derivative at t=0 sits in the large-a window at a = pi^2") {
  // With the sqrt(pi/a) normalization that makes the window dimensionally consistent.
  const double a = kPi * kPi;
  const double eps3 = 1.0 / 40;
  const double d0 = torusopt::theta_tilde(kPi / a, 0.0, 1).derivs[0] * std::sqrt(kPi / a);
  const double hi = a * std::exp(-a / 16) / (4 * kPi);
  CHECK(d0 > (1 - eps3) * hi);
  CHECK(d0 < hi);
}

TEST_CASE("theta_tilde rejects bad input and clamps tiny overshoot") {
  CHECK_THROWS_AS(torusopt::theta_tilde(1.0, 1.1, 0), std::domain_error);
  CHECK_THROWS_AS(torusopt::theta_tilde(-1.0, 0.0, 0), std::domain_error);
  CHECK_THROWS_AS(torusopt::theta_tilde(1.0, 0.0, 5), std::domain_error);
  CHECK(torusopt::theta_tilde(1.0, 1 + 1e-13, 0).value == torusopt::theta_tilde(1.0, 1.0, 0).value);
}

TEST_CASE("trunc_bound is finite and values are positive") {
  for (double c : {0.01, 0.3, 2.0, 500.0}) {
    const auto e = torusopt::theta_tilde(c, 0.5, 2);
    CHECK(std::isfinite(e.trunc_bound));
    CHECK(e.trunc_bound >= 0);
    CHECK(e.value > 0);
  }
}

TEST_CASE("theta_tilde is strictly absolutely monotone") {
  // Long double: at c = 20 the fourth derivative is ~1e-437.
  for (double c : kMonotoneC) {
    for (double t : chebyshev_points(33)) {
      const auto e = torusopt::theta_tilde<long double>(c, t, 4);
      INFO("c=" << c << " t=" << t);
      CHECK(e.value > 0);
      for (long double d : e.derivs) CHECK(d > 0);
    }
  }
}

TEST_CASE("log_deriv_tilde") {
  const auto e = torusopt::theta_tilde(1.0, 0.3, 1);
  CHECK(torusopt::log_deriv_tilde(1.0, 0.3) == doctest::Approx(e.derivs[0] / e.value).epsilon(1e-15));
  CHECK(torusopt::log_deriv_tilde(1.0, 0.0) > 0);
}

TEST_CASE("log derivative is completely monotone (finite differences)") {
  // The log derivative at c = 20 is ~1e-27 and its third derivative ~1e-108,
  // so the differencing runs in MPFR.
  PrecisionGuard guard(220);
  const Mp h("1e-5");
  for (double c : kMonotoneC) {
    auto L = [&](const Mp& t) { return torusopt::log_deriv_tilde(Mp(c), t); };
    for (double t : chebyshev_points(33)) {
      for (int n = 0; n <= 3; ++n) {
        const Mp d = n == 0 ? L(Mp(t)) : oracle::finite_difference(L, Mp(t), n, h);
        INFO("c=" << c << " t=" << t << " order=" << n);
        CHECK((n % 2 == 0 ? d > 0 : d < 0));
      }
    }
  }
}

TEST_CASE("endpoint derivatives agree with one-sided finite differences") {
  PrecisionGuard guard(120);
  const Mp h("1e-12");
  for (double c : kMonotoneC) {
    auto f = [&](const Mp& t) { return oracle::theta_tilde_mp(Mp(c), t, 0, 110)[0]; };
    // Second-order one-sided stencils.
    const Mp right = (3 * f(Mp(1)) - 4 * f(1 - h) + f(1 - 2 * h)) / (2 * h);
    const Mp left = (-3 * f(Mp(-1)) + 4 * f(-1 + h) - f(-1 + 2 * h)) / (2 * h);
    INFO("c=" << c);
    CHECK(rel(torusopt::theta_tilde(c, 1.0, 1).derivs[0], static_cast<double>(right)) <= 1e-6);
    CHECK(rel(torusopt::theta_tilde(c, -1.0, 1).derivs[0], static_cast<double>(left)) <= 1e-6);
  }
}
