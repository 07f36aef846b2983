#include "torusopt/theta.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "torusopt/precision.hpp"

namespace torusopt {
namespace {

template <typename A>
A frac(const A& y) {
  using std::floor;
  return y - floor(y);
}

// cos(2 pi r) for r in [0, 1); exact at the quarter points.
template <typename A>
A cos_2pi(const A& r) {
  using std::cos;
  if (r == 0) return A(1);
  if (r == A(0.5)) return A(-1);
  if (r == A(0.25) || r == A(0.75)) return A(0);
  return cos(2 * pi<A>() * r);
}

template <typename Scalar>
void require_positive(const Scalar& c) {
  if (!(c > 0)) throw std::domain_error("theta: parameter c must be positive");
}

[[noreturn]] void non_convergence() {
  throw std::runtime_error("theta: series did not converge within the term cap");
}

template <typename A>
struct GaussDerivs {
  std::vector<A> phi;  // phi^{(n)}(x), n = 0..max_order
  A omitted{};         // first omitted value term (already scaled by c^{-1/2})
};

template <typename A>
GaussDerivs<A> gauss_derivs(const A& c, const A& x, int max_order) {
  using std::exp;
  using std::log;
  using std::sqrt;
  const A y0 = frac(x);
  const A alpha = pi<A>() / c;
  const A sa = sqrt(alpha);
  const A tol = series_tol<A>();
  const A nearest = y0 < A(0.5) ? y0 : A(1) - y0;
  const A z_ref2 = alpha * nearest * nearest;
  const A log_tol = -log(tol);

  GaussDerivs<A> out;
  out.phi.assign(static_cast<std::size_t>(max_order) + 1, A(0));
  std::vector<A> hermite(static_cast<std::size_t>(max_order) + 1);

  auto add_image = [&](const A& y) {
    const A z = sa * y;
    const A e = exp(-z * z);
    hermite[0] = A(1);
    if (max_order >= 1) hermite[1] = 2 * z;
    for (int n = 1; n < max_order; ++n) {
      hermite[n + 1] = 2 * z * hermite[n] - 2 * A(n) * hermite[n - 1];
    }
    A factor(1);  // (-sqrt(alpha))^n
    for (int n = 0; n <= max_order; ++n) {
      out.phi[n] += factor * hermite[n] * e;
      factor *= -sa;
    }
    return e;
  };

  for (int j = 0;; ++j) {
    if (j > kMaxThetaTerms) non_convergence();
    const A y_plus = A(j) + y0;
    const A y_minus = y0 - A(j + 1);
    const A z_min = sa * (y_plus < -y_minus ? y_plus : -y_minus);
    if (j > 1) {
      const A excess = z_min * z_min - z_ref2;
      const A need = log_tol + A(max_order) * log(2 * z_min + 2) + 2;
      if (excess > need) {
        out.omitted = exp(-z_min * z_min);
        break;
      }
    }
    add_image(y_plus);
    add_image(y_minus);
  }
  const A norm = 1 / sqrt(c);
  for (auto& v : out.phi) v *= norm;
  out.omitted *= norm;
  return out;
}

template <typename A>
ThetaEval<A> tilde_chebyshev(const A& c, const A& t, int order) {
  using std::exp;
  const A tol = series_tol<A>();
  const auto m = static_cast<std::size_t>(order) + 1;
  std::vector<A> acc(m, A(0)), scale(m, A(0)), prev(m, A(0)), cur(m, A(0)), next(m);
  std::vector<A> bound(m);
  scale[0] = A(1);
  prev[0] = A(1);  // T_0
  cur[0] = t;      // T_1
  if (order >= 1) cur[1] = A(1);

  ThetaEval<A> out;
  for (int k = 1;; ++k) {
    if (k > kMaxThetaTerms) non_convergence();
    const A q = exp(-pi<A>() * c * A(k) * A(k));
    // |T_k^{(j)}| on [-1,1] is maximized at t = 1.
    bound[0] = A(1);
    for (int j = 1; j <= order; ++j) {
      bound[j] = bound[j - 1] * (A(k) * A(k) - A(j - 1) * A(j - 1)) / A(2 * j - 1);
    }
    if (k > order) {
      bool done = true;
      for (std::size_t j = 0; j < m; ++j) {
        if (2 * q * bound[j] >= tol * scale[j]) {
          done = false;
          break;
        }
      }
      if (done) {
        out.trunc_bound = 20 * q;
        break;
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      acc[j] += 2 * q * cur[j];
      scale[j] += 2 * q * bound[j];
    }
    next[0] = 2 * t * cur[0] - prev[0];
    for (std::size_t j = 1; j < m; ++j) {
      next[j] = 2 * t * cur[j] + 2 * A(static_cast<int>(j)) * cur[j - 1] - prev[j];
    }
    prev.swap(cur);
    cur.swap(next);
  }
  out.value = 1 + acc[0];
  out.derivs.assign(acc.begin() + 1, acc.end());
  return out;
}

// Width in u = 1 - |t| where the endpoint expansion converges fast enough:
// successive terms shrink by at least 10x.
template <typename A>
A endpoint_band(const A& c) {
  const A alpha = pi<A>() / c;
  const A band = A(0.1) / (4 * (alpha / (2 * pi<A>() * pi<A>()) + 1));
  return band > A(kEndpointBand) ? band : A(kEndpointBand);
}

// Regular expansion at t = +-1: with u = 1 -+ t = 2 sin^2(pi s) and s the
// x-offset from the endpoint, s^2 = arcsin^2(sqrt(u/2)) / pi^2 is a power
// series in u and theta is even in s.
template <typename A>
ThetaEval<A> tilde_endpoint(const A& c, const A& t, int order) {
  using std::abs;
  using std::ceil;
  using std::log;
  const int sigma = t > 0 ? 1 : -1;
  A u = 1 - abs(t);
  if (u < 0) u = A(0);
  const A alpha = pi<A>() / c;
  const A p2 = pi<A>() * pi<A>();
  const A tol = series_tol<A>();

  int extra = 1;
  if (u > 0) {
    const A ratio = 4 * u * (alpha / (2 * p2) + 1);
    extra = ratio < A(0.5) ? static_cast<int>(to_ld(ceil(log(tol) / log(ratio)))) + 1 : 60;
    extra = std::clamp(extra, 1, 60);
  }
  const int n_terms = order + extra;

  const A x0 = sigma > 0 ? A(0) : A(0.5);
  const auto gd = gauss_derivs(c, x0, 2 * n_terms);

  const auto m = static_cast<std::size_t>(n_terms) + 1;
  // s^2(u) = pi^{-2} sum_{j>=1} (2u)^j / (2 j^2 binom(2j, j))
  std::vector<A> s2(m, A(0));
  A binom(1), two_pow(1);
  for (std::size_t j = 1; j < m; ++j) {
    const A jj(static_cast<int>(j));
    binom = binom * (2 * jj) * (2 * jj - 1) / (jj * jj);
    two_pow *= 2;
    s2[j] = two_pow / (2 * jj * jj * binom) / p2;
  }

  std::vector<A> series(m, A(0)), power(m, A(0)), tmp(m);
  power[0] = A(1);
  A fact(1);  // (2n)!
  for (std::size_t n = 0; n < m; ++n) {
    if (n > 0) {
      std::fill(tmp.begin(), tmp.end(), A(0));
      for (std::size_t i = 0; i < m; ++i) {
        if (power[i] == 0) continue;
        for (std::size_t j = 1; i + j < m; ++j) tmp[i + j] += power[i] * s2[j];
      }
      power.swap(tmp);
      fact *= A(static_cast<int>(2 * n - 1)) * A(static_cast<int>(2 * n));
    }
    const A coef = gd.phi[2 * n] / fact;
    for (std::size_t j = 0; j < m; ++j) series[j] += coef * power[j];
  }

  ThetaEval<A> out;
  out.trunc_bound = 10 * gd.omitted;
  std::vector<A> at_u(static_cast<std::size_t>(order) + 1, A(0));
  for (int j = 0; j <= order; ++j) {
    A sum(0);
    for (int i = n_terms; i >= j; --i) {
      A falling(1);
      for (int r = 0; r < j; ++r) falling *= A(i - r);
      sum = sum * u + series[static_cast<std::size_t>(i)] * falling;
    }
    // d/dt = -sigma d/du
    at_u[static_cast<std::size_t>(j)] = (sigma > 0 && (j % 2 == 1)) ? -sum : sum;
  }
  out.value = at_u[0];
  out.derivs.assign(at_u.begin() + 1, at_u.end());
  return out;
}

template <typename A>
ThetaEval<A> tilde_chain(const A& c, const A& t, int order) {
  using std::acos;
  using std::sqrt;
  const A two_pi = 2 * pi<A>();
  const A x = acos(t) / two_pi;
  const auto gd = gauss_derivs(c, x, order);
  const auto& p = gd.phi;
  const A s = sqrt(1 - t * t);
  const A g = -1 / two_pi;
  const A x1 = g / s;
  const A x2 = g * t / (s * s * s);
  const A x3 = g * (1 + 2 * t * t) / (s * s * s * s * s);
  const A x4 = g * (6 * t * t * t + 9 * t) / (s * s * s * s * s * s * s);

  ThetaEval<A> out;
  out.value = p[0];
  out.trunc_bound = 10 * gd.omitted;
  if (order >= 1) out.derivs.push_back(p[1] * x1);
  if (order >= 2) out.derivs.push_back(p[2] * x1 * x1 + p[1] * x2);
  if (order >= 3) out.derivs.push_back(p[3] * x1 * x1 * x1 + 3 * p[2] * x1 * x2 + p[1] * x3);
  if (order >= 4) {
    out.derivs.push_back(p[4] * x1 * x1 * x1 * x1 + 6 * p[3] * x1 * x1 * x2 +
                         p[2] * (3 * x2 * x2 + 4 * x1 * x3) + p[1] * x4);
  }
  return out;
}

template <typename Scalar, typename A>
ThetaEval<Scalar> narrow(const ThetaEval<A>& in) {
  ThetaEval<Scalar> out;
  out.value = static_cast<Scalar>(in.value);
  out.trunc_bound = static_cast<Scalar>(in.trunc_bound);
  out.derivs.reserve(in.derivs.size());
  for (const auto& d : in.derivs) out.derivs.push_back(static_cast<Scalar>(d));
  return out;
}

}  // namespace

template <typename Scalar>
Scalar theta_fourier(Scalar c, Scalar x) {
  using A = Accum<Scalar>;
  using std::exp;
  using std::sqrt;
  require_positive(c);
  const A cc(c), xx(x);
  const A tol = series_tol<A>();
  // Truncate relative to min_x theta = theta(c; 1/2), not the partial sum: for
  // small c the result is many orders below the terms being cancelled.
  const A floor_value = cc >= 1 ? A(0.5) : exp(-pi<A>() / (4 * cc)) / sqrt(cc);
  A sum(0);
  for (int k = 1;; ++k) {
    if (k > kMaxThetaTerms) non_convergence();
    const A kk(k);
    const A term = exp(-pi<A>() * cc * kk * kk);
    if (term < tol * floor_value) break;
    sum += term * cos_2pi(frac(kk * xx));
  }
  return static_cast<Scalar>(1 + 2 * sum);
}

template <typename Scalar>
Scalar theta_gauss(Scalar c, Scalar x) {
  using A = Accum<Scalar>;
  using std::exp;
  using std::sqrt;
  require_positive(c);
  const A cc(c);
  const A y0 = frac(A(x));
  const A alpha = pi<A>() / cc;
  const A tol = series_tol<A>();
  A sum(0);
  for (int j = 0;; ++j) {
    if (j > kMaxThetaTerms) non_convergence();
    const A yp = A(j) + y0;
    const A ym = A(j + 1) - y0;
    const A a = exp(-alpha * yp * yp);
    const A b = exp(-alpha * ym * ym);
    if (j > 0 && a + b < tol * sum) break;
    sum += a + b;
  }
  return static_cast<Scalar>(sum / sqrt(cc));
}

template <typename Scalar>
Scalar theta(Scalar c, Scalar x) {
  return c >= Scalar(kThetaSwitchover) ? theta_fourier(c, x) : theta_gauss(c, x);
}

template <typename Scalar>
ThetaEval<Scalar> theta_tilde(Scalar c, Scalar t, int order) {
  using A = Accum<Scalar>;
  using std::abs;
  using std::acos;
  require_positive(c);
  if (order < 0 || order > kMaxThetaOrder) {
    throw std::domain_error("theta_tilde: derivative order must be in [0, 4]");
  }
  if (!(abs(t) <= Scalar(1) + Scalar(1e-12))) {
    throw std::domain_error("theta_tilde: t outside [-1, 1]");
  }
  A tt(t);
  if (tt > 1) tt = A(1);
  if (tt < -1) tt = A(-1);
  const A cc(c);
  if (cc >= A(kThetaSwitchover)) return narrow<Scalar>(tilde_chebyshev(cc, tt, order));
  if (cc >= A(kChebyshevDerivFloor)) {
    // Values from the Gaussian images; derivatives from the Chebyshev series,
    // which stays well conditioned here while the chain rule does not.
    auto out = tilde_chebyshev(cc, tt, order);
    out.value = A(theta_gauss(cc, acos(tt) / (2 * pi<A>())));
    return narrow<Scalar>(out);
  }
  if (1 - abs(tt) <= endpoint_band(cc)) return narrow<Scalar>(tilde_endpoint(cc, tt, order));
  return narrow<Scalar>(tilde_chain(cc, tt, order));
}

template <typename Scalar>
Scalar log_deriv_tilde(Scalar c, Scalar t) {
  const auto ev = theta_tilde(c, t, 1);
  return ev.derivs[0] / ev.value;
}

template <typename Scalar>
std::vector<Scalar> theta_gauss_x_derivs(Scalar c, Scalar x, int max_order) {
  using A = Accum<Scalar>;
  require_positive(c);
  const auto gd = gauss_derivs(A(c), A(x), max_order);
  std::vector<Scalar> out;
  out.reserve(gd.phi.size());
  for (const auto& v : gd.phi) out.push_back(static_cast<Scalar>(v));
  return out;
}

#define TORUSOPT_INSTANTIATE_THETA(S)                                  \
  template S theta_fourier<S>(S, S);                                   \
  template S theta_gauss<S>(S, S);                                     \
  template S theta<S>(S, S);                                           \
  template ThetaEval<S> theta_tilde<S>(S, S, int);                     \
  template S log_deriv_tilde<S>(S, S);                                 \
  template std::vector<S> theta_gauss_x_derivs<S>(S, S, int);

TORUSOPT_INSTANTIATE_THETA(double)
TORUSOPT_INSTANTIATE_THETA(long double)
TORUSOPT_INSTANTIATE_THETA(Mp)

#undef TORUSOPT_INSTANTIATE_THETA

}  // namespace torusopt
