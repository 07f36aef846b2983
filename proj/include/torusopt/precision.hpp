#ifndef TORUSOPT_PRECISION_HPP
#define TORUSOPT_PRECISION_HPP

// Scalar helpers shared by the templated numerics. Every templated routine is
// instantiated for double, long double and Mp (variable-precision MPFR).

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <type_traits>

#include <boost/multiprecision/mpfr.hpp>

namespace torusopt {

using Mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                         boost::multiprecision::et_off>;

template <typename Scalar>
inline constexpr bool is_builtin_float_v = std::is_floating_point_v<Scalar>;

/// Accumulator type: doubles are summed in long double, everything else in itself.
template <typename Scalar>
using Accum = std::conditional_t<std::is_same_v<Scalar, double>, long double, Scalar>;

template <typename Scalar>
inline Scalar pi() {
  using std::acos;
  return acos(Scalar(-1));
}

/// Relative truncation threshold for series. 1e-18 for hardware types; just
/// below the working epsilon for Mp.
template <typename Scalar>
inline Scalar series_tol() {
  if constexpr (is_builtin_float_v<Scalar>) {
    return Scalar(1e-18L);
  } else {
    return std::numeric_limits<Scalar>::epsilon() / 16;
  }
}

template <typename Scalar>
inline long double to_ld(const Scalar& x) {
  return static_cast<long double>(x);
}

inline std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

/// Sets the default MPFR precision (decimal digits) for its lifetime. The
/// default is process-global, so guarded sections are serialized.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits)
      : lock_(precision_mutex()), saved_(Mp::default_precision()) {
    Mp::default_precision(digits);
  }
  ~PrecisionGuard() { Mp::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_;
};

/// Decimal digits needed to resolve e^{-4 d} against O(1) quantities, with
/// d = pi^2 / a, plus e^{-2a} corrections at large a. Used to size Mp.
inline unsigned digits_for_steepness(double a) {
  const double d = 9.869604401089358 / a;
  const double need = std::max(4.0 * d, 2.0 * a) / std::log(10.0);
  return static_cast<unsigned>(30.0 + 1.1 * need);
}

}  // namespace torusopt

#endif  // TORUSOPT_PRECISION_HPP
