#ifndef TORUSOPT_ENERGY_HPP
#define TORUSOPT_ENERGY_HPP

// Periodized Gaussian e^{-a|x|^2} on a rectangular lattice L = r1 Z x r2 Z.
//
// Per coordinate, sum_k e^{-a (x + k r)^2} = (r sqrt(a/pi))^{-1} theta(pi/(a r^2); x/r),
// so the raw lattice sum F and the theta product F~(t) = prod_i theta~(c_i; t_i)
// differ by the constant scale_factor = prod_i (r_i sqrt(a/pi))^{-1}. Energies
// are computed in both units; optimization and certification use F~.

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "torusopt/lattice.hpp"
#include "torusopt/precision.hpp"
#include "torusopt/theta.hpp"

namespace torusopt {

template <typename Scalar = double>
struct GaussParam {
  Scalar a;
  RectLattice<Scalar> L;

  GaussParam(Scalar a_, RectLattice<Scalar> L_) : a(a_), L(std::move(L_)) {
    if (!(a > Scalar(0))) throw std::invalid_argument("GaussParam: a must be positive");
  }

  /// Theta parameters c_i = pi / (a r_i^2).
  Vec2<Scalar> c() const {
    return Vec2<Scalar>(pi<Scalar>() / (a * L.r[0] * L.r[0]), pi<Scalar>() / (a * L.r[1] * L.r[1]));
  }
};

template <typename Scalar = double>
struct EnergyReport {
  Scalar energy_normalized{};
  Scalar energy_raw{};
  Scalar scale_factor{};
};

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
Scalar scale_factor(const GaussParam<Scalar>& p) {
  using std::sqrt;
  const Scalar s = sqrt(p.a / pi<Scalar>());
  return Scalar(1) / (p.L.r[0] * s * p.L.r[1] * s);
}

/// F~(t) = theta~(c1; t1) theta~(c2; t2).
template <typename Scalar>
Scalar potential_tilde(const GaussParam<Scalar>& p, const Vec2<Scalar>& t) {
  const Vec2<Scalar> c = p.c();
  return theta_tilde(c[0], t[0], 0).value * theta_tilde(c[1], t[1], 0).value;
}

namespace detail {

// sum_k e^{-a (y + k r)^2}, y reduced to [-r/2, r/2], summed outward until the
// next pair of images is below the relative tolerance.
template <typename Scalar>
Scalar gaussian_line_sum(Scalar a, Scalar r, Scalar y) {
  using A = Accum<Scalar>;
  using std::exp;
  using std::floor;
  const A aa(a), rr(r);
  A yy(y);
  yy -= rr * floor(yy / rr + A(0.5));
  A sum = exp(-aa * yy * yy);
  for (int k = 1;; ++k) {
    if (k > kMaxThetaTerms) throw std::runtime_error("gaussian_line_sum: no convergence");
    const A kr = A(k) * rr;
    const A term = exp(-aa * (yy + kr) * (yy + kr)) + exp(-aa * (yy - kr) * (yy - kr));
    sum += term;
    if (term < series_tol<A>() * sum * A(1e-3)) break;
  }
  return static_cast<Scalar>(sum);
}

}  // namespace detail

/// F(x) = sum_{v in L} e^{-a |x + v|^2}, summed directly per coordinate.
template <typename Scalar>
Scalar potential_raw(const GaussParam<Scalar>& p, const Vec2<Scalar>& x) {
  return detail::gaussian_line_sum(p.a, p.L.r[0], x[0]) * detail::gaussian_line_sum(p.a, p.L.r[1], x[1]);
}

/// sum_{i != j} F(x_i - x_j) in both unit systems.
template <typename Scalar>
EnergyReport<Scalar> config_energy(const Configuration<Scalar>& cfg, const GaussParam<Scalar>& p) {
  if (!(cfg.lattice() == p.L)) throw std::invalid_argument("config_energy: lattice mismatch");
  using A = Accum<Scalar>;
  A norm(0), raw(0);
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.size(); ++j) {
      const Vec2<Scalar> d = cfg[i] - cfg[j];
      norm += A(potential_tilde(p, cheb_map(d, p.L)));
      raw += A(potential_raw(p, d));
    }
  }
  return {static_cast<Scalar>(2 * norm), static_cast<Scalar>(2 * raw), scale_factor(p)};
}

/// Gradient of the normalized energy with respect to (x_0, y_0, x_1, y_1, ...).
template <typename Scalar>
VecX<Scalar> energy_gradient(const Configuration<Scalar>& cfg, const GaussParam<Scalar>& p) {
  using std::sin;
  const std::size_t n = cfg.size();
  const Vec2<Scalar> c = p.c();
  const Scalar two_pi = 2 * pi<Scalar>();
  VecX<Scalar> g = VecX<Scalar>::Zero(2 * static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2<Scalar> d = cfg[i] - cfg[j];
      const Vec2<Scalar> t = cheb_map(d, p.L);
      const auto e1 = theta_tilde(c[0], t[0], 1);
      const auto e2 = theta_tilde(c[1], t[1], 1);
      // dt_k/dd_k = -(2 pi / r_k) sin(2 pi d_k / r_k)
      const Scalar w1 = -two_pi / p.L.r[0] * sin(two_pi * d[0] / p.L.r[0]);
      const Scalar w2 = -two_pi / p.L.r[1] * sin(two_pi * d[1] / p.L.r[1]);
      // E counts each unordered pair twice.
      const Vec2<Scalar> grad(2 * e1.derivs[0] * w1 * e2.value, 2 * e1.value * e2.derivs[0] * w2);
      g.template segment<2>(2 * i) += grad;
      g.template segment<2>(2 * j) -= grad;
    }
  }
  return g;
}

/// sum_{0 != v in L} e^{-a |v|^2} = (1 + u1)(1 + u2) - 1 with u_i = 2 sum_{k>=1} e^{-a r_i^2 k^2}.
template <typename Scalar>
Scalar lattice_sum_nonzero(const GaussParam<Scalar>& p) {
  const Scalar u1 = detail::gaussian_line_sum(p.a, p.L.r[0], Scalar(0)) - 1;
  const Scalar u2 = detail::gaussian_line_sum(p.a, p.L.r[1], Scalar(0)) - 1;
  return u1 + u2 + u1 * u2;
}

/// Energy per point of the infinite periodic configuration cfg + L, raw units.
template <typename Scalar>
Scalar average_energy(const Configuration<Scalar>& cfg, const GaussParam<Scalar>& p) {
  const Scalar n(static_cast<double>(cfg.size()));
  return (config_energy(cfg, p).energy_raw + n * lattice_sum_nonzero(p)) / n;
}

/// Radial potential of the squared distance.
using RadialPotential = std::function<double(double)>;

inline RadialPotential gaussian_potential(double a) {
  return [a](double r2) { return std::exp(-a * r2); };
}

/// |x|^{-s} for s > 2.
inline RadialPotential riesz_potential(double s) {
  if (!(s > 2)) throw std::invalid_argument("riesz_potential: need s > 2");
  return [s](double r2) { return std::pow(r2, -s / 2); };
}

/// sum over |k_i| <= cutoff of f(|x + (k1 r1, k2 r2)|^2); a plain oracle loop.
inline double brute_force_potential(const RadialPotential& f, const RectLattice<double>& L,
                                    const Vec2<double>& x, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("brute_force_potential: negative cutoff");
  double sum = 0;
  for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      const Vec2<double> y = x + Vec2<double>(k1 * L.r[0], k2 * L.r[1]);
      sum += f(y.squaredNorm());
    }
  }
  return sum;
}

}  // namespace torusopt

#endif  // TORUSOPT_ENERGY_HPP
