#include "torusopt/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "torusopt/parallel.hpp"

namespace torusopt {

namespace {

using V = Vec2<double>;
using Points = std::vector<V>;

void validate(const SearchConfig& sc, int min_n) {
  if (sc.n < min_n) throw std::domain_error("search: too few points");
  if (sc.n > 16) throw std::invalid_argument("search: n > 16 is not supported");
  if (sc.restarts < 1 || sc.max_iters < 1 || !(sc.tol_grad > 0) || sc.step_init < 0) {
    throw std::invalid_argument("search: need restarts >= 1, max_iters >= 1, tol_grad > 0, step_init >= 0");
  }
}

double step_for(const SearchConfig& sc, const RectLattice<double>& L) {
  return sc.step_init > 0 ? sc.step_init : 0.1 * L.r.minCoeff();
}

// Nearest-image difference x - y, each coordinate in [-r/2, r/2].
V wrap(const V& d, const RectLattice<double>& L) {
  V out;
  for (int k = 0; k < 2; ++k) out[k] = d[k] - L.r[k] * std::round(d[k] / L.r[k]);
  return out;
}

struct Descent {
  int iterations = 0;
  bool converged = false;
};

// Gradient descent with Armijo backtracking over points 1..n-1; point 0 stays put.
// f returns the objective, g its gradient in (x0, y0, x1, ...) layout.
template <typename F, typename G>
Descent descend(Points& pts, const RectLattice<double>& L, F&& f, G&& g, int max_iters, double step, double tol) {
  Descent out;
  double fx = f(pts);
  double alpha = -1;
  for (int it = 0; it < max_iters; ++it) {
    out.iterations = it + 1;
    VecX<double> grad = g(pts);
    grad.head<2>().setZero();
    const double gmax = grad.cwiseAbs().maxCoeff();
    if (gmax <= tol) {
      out.converged = true;
      return out;
    }
    const double cap = step / gmax;
    alpha = alpha < 0 ? cap : std::min(2 * alpha, cap);
    const double g2 = grad.squaredNorm();
    bool accepted = false;
    Points trial(pts.size());
    while (alpha * gmax > 1e-15 * L.r.minCoeff()) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        trial[i] = reduce(V(pts[i] - alpha * grad.segment<2>(2 * static_cast<Eigen::Index>(i))), L);
      }
      const double ft = f(trial);
      if (ft <= fx - kArmijoC * alpha * g2) {
        pts.swap(trial);
        fx = ft;
        accepted = true;
        break;
      }
      alpha *= kArmijoShrink;
    }
    if (!accepted) {
      // No representable decrease along -grad: the iterate is stationary to
      // working precision. It counts as converged only if the gradient is small.
      out.converged = gmax <= std::sqrt(tol);
      return out;
    }
  }
  return out;
}

double energy_of(const Points& pts, const GaussParam<double>& p) {
  long double s = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) s += potential_tilde(p, cheb_map(V(pts[i] - pts[j]), p.L));
  }
  return static_cast<double>(2 * s);
}

double mean_pair_distance(const Points& pts, const RectLattice<double>& L) {
  double s = 0;
  int count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j, ++count) s += wrap(pts[i] - pts[j], L).norm();
  }
  return s / count;
}

// -softmin_tau of the pair distances and its gradient.
struct NegSoftmin {
  const RectLattice<double>& L;
  double tau;

  double operator()(const Points& pts) const {
    std::vector<double> d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) d.push_back(wrap(pts[i] - pts[j], L).norm());
    }
    const double m = *std::min_element(d.begin(), d.end());
    double s = 0;
    for (double x : d) s += std::exp(-(x - m) / tau);
    return -(m - tau * std::log(s));
  }

  VecX<double> grad(const Points& pts) const {
    const std::size_t n = pts.size();
    std::vector<V> diff;
    std::vector<double> d;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        diff.push_back(wrap(pts[i] - pts[j], L));
        d.push_back(diff.back().norm());
      }
    }
    const double m = *std::min_element(d.begin(), d.end());
    std::vector<double> w(d.size());
    double s = 0;
    for (std::size_t k = 0; k < d.size(); ++k) s += (w[k] = std::exp(-(d[k] - m) / tau));
    VecX<double> g = VecX<double>::Zero(2 * static_cast<Eigen::Index>(n));
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        if (d[k] == 0) continue;
        const V u = (w[k] / s) * diff[k] / d[k];
        // d(-softmin)/dx_i = -sum w_k dd_k/dx_i
        g.segment<2>(2 * static_cast<Eigen::Index>(i)) -= u;
        g.segment<2>(2 * static_cast<Eigen::Index>(j)) += u;
      }
    }
    return g;
  }
};

// Max-min polish. The softmin optimum sits O(tau log k) below the packing
// optimum, so the near-active constraints d_a(x) >= t (one per pair and
// lattice image) are solved as equalities together with the KKT conditions
// sum lambda_a grad d_a = 0, sum lambda_a = 1 by Gauss-Newton.
struct Active {
  std::size_t i, j;
  V shift;
};

std::vector<Active> active_set(const Points& pts, const RectLattice<double>& L, double cutoff) {
  std::vector<Active> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const V base = wrap(pts[i] - pts[j], L);
      for (int s0 = -1; s0 <= 1; ++s0) {
        for (int s1 = -1; s1 <= 1; ++s1) {
          const V shift(s0 * L.r[0], s1 * L.r[1]);
          if ((base + shift).norm() <= cutoff) out.push_back({i, j, V(shift - (pts[i] - pts[j] - base))});
        }
      }
    }
  }
  return out;
}

// Returns the KKT residual norm reached.
double polish(Points& pts, const RectLattice<double>& L, double cutoff) {
  const auto act = active_set(pts, L, cutoff);
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index k = static_cast<Eigen::Index>(act.size());
  const Eigen::Index nx = 2 * (n - 1);
  if (k == 0 || nx == 0) return INFINITY;
  // Difference vector of constraint a; shift keeps the chosen image fixed.
  auto diff = [&](const Points& x, const Active& a) { return V(x[a.i] - x[a.j] + a.shift); };
  // Column of free variable for point p, or -1 for the pinned point.
  auto col = [](std::size_t p) { return p == 0 ? Eigen::Index(-1) : 2 * (static_cast<Eigen::Index>(p) - 1); };

  Points x = pts;
  double t = INFINITY;
  for (const auto& a : act) t = std::min(t, diff(x, a).norm());
  // Initial multipliers: least squares on stationarity with sum = 1.
  VecX<double> lam;
  {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nx + 1, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const V u = diff(x, act[c]).normalized();
      if (col(act[c].i) >= 0) G.block<2, 1>(col(act[c].i), c) += u;
      if (col(act[c].j) >= 0) G.block<2, 1>(col(act[c].j), c) -= u;
      G(nx, c) = 1;
    }
    VecX<double> rhs = VecX<double>::Zero(nx + 1);
    rhs[nx] = 1;
    lam = G.completeOrthogonalDecomposition().solve(rhs);
  }
  double res = INFINITY;
  for (int it = 0; it < 60; ++it) {
    const Eigen::Index rows = k + nx + 1, cols = nx + 1 + k;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, cols);
    VecX<double> F = VecX<double>::Zero(rows);
    for (Eigen::Index c = 0; c < k; ++c) {
      const V dv = diff(x, act[c]);
      const double d = dv.norm();
      const V u = dv / d;
      const Eigen::Matrix2d M = (Eigen::Matrix2d::Identity() - u * u.transpose()) / d;
      const Eigen::Index ci = col(act[c].i), cj = col(act[c].j);
      F[c] = d - t;
      J(c, nx) = -1;
      if (ci >= 0) {
        J.block<1, 2>(c, ci) += u.transpose();
        F.segment<2>(k + ci) += lam[c] * u;
        J.block<2, 2>(k + ci, ci) += lam[c] * M;
        J.block<2, 1>(k + ci, nx + 1 + c) += u;
      }
      if (cj >= 0) {
        J.block<1, 2>(c, cj) -= u.transpose();
        F.segment<2>(k + cj) -= lam[c] * u;
        J.block<2, 2>(k + cj, cj) += lam[c] * M;
        J.block<2, 1>(k + cj, nx + 1 + c) -= u;
      }
      if (ci >= 0 && cj >= 0) {
        J.block<2, 2>(k + ci, cj) -= lam[c] * M;
        J.block<2, 2>(k + cj, ci) -= lam[c] * M;
      }
      J(rows - 1, nx + 1 + c) = 1;
    }
    F[rows - 1] = lam.sum() - 1;
    res = F.norm();
    if (res < 1e-14) break;
    const VecX<double> step = J.completeOrthogonalDecomposition().solve(-F);
    for (Eigen::Index p = 1; p < n; ++p) x[p] += step.segment<2>(2 * (p - 1));
    t += step[nx];
    lam += step.tail(k);
  }
  for (auto& p : x) p = reduce(p, L);
  pts.swap(x);
  return res;
}

struct RestartOutcome {
  Points pts;
  double value = 0;
  int iterations = 0;
  bool converged = false;
};

SearchResult collect(std::vector<RestartOutcome> runs, const RectLattice<double>& L, bool maximize) {
  SearchResult r;
  int best = 0;
  for (int k = 0; k < static_cast<int>(runs.size()); ++k) {
    r.per_restart_values.push_back(runs[k].value);
    r.iterations_used.push_back(runs[k].iterations);
    r.converged.push_back(runs[k].converged);
    const bool better = maximize ? runs[k].value > runs[best].value : runs[k].value < runs[best].value;
    if (better) best = k;
  }
  r.best_restart = best;
  r.best_value = runs[best].value;
  r.best_config = Configuration<double>(runs[best].pts, L);
  return r;
}

}  // namespace

Configuration<double> random_start(const RectLattice<double>& L, int n, std::uint64_t seed, int restart) {
  if (n < 1) throw std::domain_error("random_start: n must be >= 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Points pts{V(0, 0)};
  for (int i = 1; i < n; ++i) {
    const double x = u(rng) * L.r[0];
    const double y = u(rng) * L.r[1];
    pts.emplace_back(x, y);
  }
  return Configuration<double>(std::move(pts), L);
}

SearchResult minimize_energy(const GaussParam<double>& p, const SearchConfig& sc) {
  validate(sc, 1);
  const double step = step_for(sc, p.L);
  auto runs = parallel_map<RestartOutcome>(sc.restarts, [&](std::size_t k) {
    RestartOutcome out;
    out.pts = random_start(p.L, sc.n, sc.seed, static_cast<int>(k)).points();
    if (sc.n == 1) {
      out.converged = true;
      return out;
    }
    const auto d = descend(
        out.pts, p.L, [&](const Points& x) { return energy_of(x, p); },
        [&](const Points& x) { return energy_gradient(Configuration<double>(x, p.L), p); }, sc.max_iters, step,
        sc.tol_grad);
    out.value = energy_of(out.pts, p);
    out.iterations = d.iterations;
    out.converged = d.converged;
    return out;
  });
  return collect(std::move(runs), p.L, false);
}

double packing_radius(const Configuration<double>& cfg) {
  if (cfg.size() < 2) throw std::domain_error("packing_radius: need at least two points");
  double best = INFINITY;
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.size(); ++j) {
      V d = cfg[i] - cfg[j];
      for (int k = 0; k < 2; ++k) {
        const double a = std::abs(d[k]);
        d[k] = std::min(a, cfg.lattice().r[k] - a);
      }
      best = std::min(best, d.norm());
    }
  }
  return best;
}

SearchResult maximize_packing(const RectLattice<double>& L, const SearchConfig& sc) {
  validate(sc, 2);
  const double step = step_for(sc, L);
  auto runs = parallel_map<RestartOutcome>(sc.restarts, [&](std::size_t k) {
    RestartOutcome out;
    out.pts = random_start(L, sc.n, sc.seed, static_cast<int>(k)).points();
    for (double scale : kSoftminSchedule) {
      const NegSoftmin obj{L, scale * mean_pair_distance(out.pts, L)};
      const auto d = descend(
          out.pts, L, [&](const Points& x) { return obj(x); }, [&](const Points& x) { return obj.grad(x); },
          sc.max_iters, step, sc.tol_grad);
      out.iterations += d.iterations;
      out.converged = d.converged;
    }
    out.value = packing_radius(Configuration<double>(out.pts, L));
    // Active sets of increasing width; kept only if the exact radius improves.
    for (double width : kPolishWidths) {
      Points trial = out.pts;
      const double res = polish(trial, L, out.value * (1 + width));
      const double v = packing_radius(Configuration<double>(trial, L));
      if (v > out.value) {
        out.pts.swap(trial);
        out.value = v;
        out.converged = res < 1e-12;
      }
    }
    return out;
  });
  return collect(std::move(runs), L, true);
}

double pigeonhole_bound(const RectLattice<double>& L, int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("pigeonhole_bound: n must be even, n = 2m");
  if (std::abs(L.r[0] - 1) > 1e-12) throw std::invalid_argument("pigeonhole_bound: need r1 = 1");
  const double beta = L.r[1] / (n / 2);
  return std::sqrt(0.25 + beta * beta / 4);
}

}  // namespace torusopt
