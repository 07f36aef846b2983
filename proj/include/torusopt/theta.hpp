#ifndef TORUSOPT_THETA_HPP
#define TORUSOPT_THETA_HPP

// Jacobi theta function of the third kind,
//
//   theta(c; x)  = sum_k exp(-pi k^2 c) exp(2 pi i k x)          (Fourier form)
//                = c^{-1/2} sum_k exp(-pi (k + x)^2 / c)          (Gaussian images)
//
// and its pullback under t = cos(2 pi x),
//
//   theta~(c; t) = 1 + 2 sum_{k>=1} exp(-pi k^2 c) T_k(t),  t in [-1, 1].
//
// The Fourier/Chebyshev form is used for c >= 1 and the Gaussian-image form for
// c < 1. For 0.25 <= c < 1 t-derivatives still come from the Chebyshev series.
// Below that, interior t-derivatives come from x-derivatives through the chain
// rule; near t = +-1 (a band of width >= 1e-6 that grows as c shrinks) they
// come from the even Taylor coefficients of theta in x, re-expanded in
// u = 1 -+ t, which is regular at the endpoints.

#include <vector>

namespace torusopt {

inline constexpr double kThetaSwitchover = 1.0;
inline constexpr double kChebyshevDerivFloor = 0.25;
inline constexpr double kEndpointBand = 1e-6;
inline constexpr int kMaxThetaTerms = 10000;
inline constexpr int kMaxThetaOrder = 4;

template <typename Scalar>
struct ThetaEval {
  Scalar value{};
  std::vector<Scalar> derivs;  // derivs[j-1] = d^j/dt^j theta~
  Scalar trunc_bound{};        // ten times the first omitted term of the value series
};

/// Fourier series; accumulates in long double when Scalar is double.
template <typename Scalar>
Scalar theta_fourier(Scalar c, Scalar x);

/// Gaussian-image series.
template <typename Scalar>
Scalar theta_gauss(Scalar c, Scalar x);

/// theta(c; x) through whichever series converges fastest for c.
template <typename Scalar>
Scalar theta(Scalar c, Scalar x);

/// theta~(c; t) and its first `order` t-derivatives (order <= 4 through the
/// public surface; internal callers may ask for more on the Chebyshev path).
/// Throws std::domain_error for c <= 0, |t| > 1 + 1e-12 or order out of range.
template <typename Scalar>
ThetaEval<Scalar> theta_tilde(Scalar c, Scalar t, int order);

/// theta~'(c; t) / theta~(c; t).
template <typename Scalar>
Scalar log_deriv_tilde(Scalar c, Scalar t);

/// phi^{(n)}(x) for n = 0..max_order with phi = theta(c; .), from the Gaussian
/// images. Exposed for the endpoint expansion and for tests.
template <typename Scalar>
std::vector<Scalar> theta_gauss_x_derivs(Scalar c, Scalar x, int max_order);

}  // namespace torusopt

#endif  // TORUSOPT_THETA_HPP
