#ifndef TORUSOPT_LATTICE_HPP
#define TORUSOPT_LATTICE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "torusopt/precision.hpp"

namespace torusopt {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

inline constexpr double kMembershipTol = 1e-9;

/// Lattice V Z^2; columns of V are the basis vectors.
template <typename Scalar = double>
class Lattice {
 public:
  explicit Lattice(const Mat2<Scalar>& generator) : generator_(generator) {
    if (generator_.determinant() == Scalar(0)) {
      throw std::invalid_argument("Lattice: singular generator");
    }
  }

  const Mat2<Scalar>& generator() const { return generator_; }
  Scalar covolume() const {
    using std::abs;
    return abs(generator_.determinant());
  }

  /// Basis coordinates of v; integral iff v is a lattice vector.
  Vec2<Scalar> coordinates(const Vec2<Scalar>& v) const { return generator_.lu().solve(v); }

  bool contains(const Vec2<Scalar>& v, Scalar tol = Scalar(kMembershipTol)) const {
    using std::abs;
    using std::round;
    const Vec2<Scalar> k = coordinates(v);
    return abs(k[0] - round(k[0])) <= tol && abs(k[1] - round(k[1])) <= tol;
  }

 private:
  Mat2<Scalar> generator_;
};

/// r1 Z x r2 Z.
template <typename Scalar = double>
struct RectLattice {
  Vec2<Scalar> r;

  RectLattice() : r(Scalar(1), Scalar(1)) {}
  explicit RectLattice(const Vec2<Scalar>& sides) : r(sides) {
    if (!(r.minCoeff() > Scalar(0))) {
      throw std::invalid_argument("RectLattice: side lengths must be positive");
    }
  }
  RectLattice(Scalar r1, Scalar r2) : RectLattice(Vec2<Scalar>(r1, r2)) {}

  Lattice<Scalar> lattice() const { return Lattice<Scalar>(r.asDiagonal().toDenseMatrix()); }
  Scalar area() const { return r.prod(); }

  friend bool operator==(const RectLattice& a, const RectLattice& b) { return a.r == b.r; }
};

/// Dual lattice, generated by V^{-T}.
template <typename Scalar>
Lattice<Scalar> dual(const Lattice<Scalar>& lattice) {
  return Lattice<Scalar>(lattice.generator().inverse().transpose());
}

/// |sup : sub| when every basis vector of `sub` lies in `sup`; nullopt otherwise.
template <typename Scalar>
std::optional<long> sublattice_index(const Lattice<Scalar>& sub, const Lattice<Scalar>& sup) {
  for (int j = 0; j < 2; ++j) {
    if (!sup.contains(sub.generator().col(j))) return std::nullopt;
  }
  return std::lround(static_cast<double>(sub.covolume() / sup.covolume()));
}

/// x mod L, each coordinate in [0, r_i).
template <typename Scalar>
Vec2<Scalar> reduce(const Vec2<Scalar>& x, const RectLattice<Scalar>& lattice) {
  using std::floor;
  Vec2<Scalar> out;
  for (int i = 0; i < 2; ++i) {
    const Scalar r = lattice.r[i];
    Scalar y = x[i] - r * floor(x[i] / r);
    if (y >= r || y < Scalar(0)) y = Scalar(0);
    out[i] = y;
  }
  return out;
}

/// t_i = cos(2 pi x_i / r_i).
template <typename Scalar>
Vec2<Scalar> cheb_map(const Vec2<Scalar>& x, const RectLattice<Scalar>& lattice) {
  using std::cos;
  const Scalar two_pi = Scalar(2) * pi<Scalar>();
  return Vec2<Scalar>(cos(two_pi * x[0] / lattice.r[0]), cos(two_pi * x[1] / lattice.r[1]));
}

/// n points reduced into the fundamental domain of a rectangular lattice.
/// Order is preserved; duplicates are allowed.
template <typename Scalar = double>
class Configuration {
 public:
  Configuration(std::vector<Vec2<Scalar>> points, RectLattice<Scalar> lattice)
      : lattice_(std::move(lattice)), points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("Configuration: needs at least one point");
    for (auto& p : points_) p = reduce(p, lattice_);
  }

  const RectLattice<Scalar>& lattice() const { return lattice_; }
  const std::vector<Vec2<Scalar>>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Vec2<Scalar>& operator[](std::size_t i) const { return points_[i]; }

  /// Rigid shift by w, re-reduced.
  Configuration translated(const Vec2<Scalar>& w) const {
    auto pts = points_;
    for (auto& p : pts) p += w;
    return Configuration(std::move(pts), lattice_);
  }

  /// Points sorted lexicographically, for order-insensitive comparison.
  std::vector<Vec2<Scalar>> sorted_points() const {
    auto pts = points_;
    std::sort(pts.begin(), pts.end(), [](const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
      return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    return pts;
  }

 private:
  RectLattice<Scalar> lattice_;
  std::vector<Vec2<Scalar>> points_;
};

/// Index k of the dual frequency (k1 / r1, k2 / r2), all k_i >= 0.
struct FreqIndex {
  std::array<int, 2> k{0, 0};

  FreqIndex() = default;
  FreqIndex(int k1, int k2) : k{k1, k2} {
    if (k1 < 0 || k2 < 0) throw std::invalid_argument("FreqIndex: components must be >= 0");
  }
  int operator[](std::size_t i) const { return k[i]; }
  friend bool operator==(const FreqIndex&, const FreqIndex&) = default;
  friend auto operator<=>(const FreqIndex&, const FreqIndex&) = default;
};

/// Size of the orbit of the frequency under coordinate sign flips.
inline int freq_orbit_size(const FreqIndex& f) {
  int size = 1;
  for (int c : f.k) size *= (c > 0 ? 2 : 1);
  return size;
}

/// True when the frequency (k1, k2 / (2 beta)) of Z x 2 beta Z also lies in the
/// dual of the centred lattice Phi_beta, i.e. 2 | k2 and k2/2 = k1 (mod 2).
/// A magic function must put zero weight on such frequencies. The rule does not
/// depend on beta.
inline bool is_forbidden_freq(const FreqIndex& f, double /*beta*/ = 1.0) {
  return f[1] % 2 == 0 && ((f[1] / 2 - f[0]) % 2 == 0);
}

/// Z x m beta Z.
template <typename Scalar = double>
RectLattice<Scalar> rect_lattice_m(Scalar beta, int m) {
  return RectLattice<Scalar>(Scalar(1), Scalar(m) * beta);
}

/// Centred lattice with basis (1, 0), (1/2, beta/2).
template <typename Scalar = double>
Lattice<Scalar> phi_lattice(Scalar beta) {
  Mat2<Scalar> v;
  v << Scalar(1), Scalar(0.5), Scalar(0), beta / Scalar(2);
  return Lattice<Scalar>(v);
}

/// The 2m points of Phi_beta in [0,1) x [0, m beta):
/// (0, k beta) and (1/2, (k + 1/2) beta), k = 0..m-1.
template <typename Scalar = double>
Configuration<Scalar> canonical_config(Scalar beta, int m) {
  if (!(beta > Scalar(0)) || m < 1) {
    throw std::invalid_argument("canonical_config: need beta > 0 and m >= 1");
  }
  std::vector<Vec2<Scalar>> pts;
  pts.reserve(2 * static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) pts.emplace_back(Scalar(0), Scalar(k) * beta);
  for (int k = 0; k < m; ++k) pts.emplace_back(Scalar(0.5), (Scalar(k) + Scalar(0.5)) * beta);
  return Configuration<Scalar>(std::move(pts), rect_lattice_m(beta, m));
}

}  // namespace torusopt

#endif  // TORUSOPT_LATTICE_HPP
