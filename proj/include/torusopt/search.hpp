#ifndef TORUSOPT_SEARCH_HPP
#define TORUSOPT_SEARCH_HPP

// Multistart local search on the torus R^2 / L: energy minimization by
// gradient descent with Armijo backtracking, and packing-radius maximization
// through a log-sum-exp softmin with a decreasing temperature schedule.
// Point 0 is pinned to the origin. Restart k draws from its own generator
// seeded by (seed, k), so results do not depend on the thread count.

#include <cstdint>
#include <vector>

#include "torusopt/energy.hpp"
#include "torusopt/lattice.hpp"

namespace torusopt {

struct SearchConfig {
  int n = 4;
  int restarts = 50;
  int max_iters = 5000;
  std::uint64_t seed = 1;
  double step_init = 0;  // 0: 0.1 min(r)
  double tol_grad = 1e-10;
};

inline constexpr int kEnergyRestarts = 50;
inline constexpr int kPackingRestarts = 200;
inline constexpr double kArmijoC = 1e-4;
inline constexpr double kArmijoShrink = 0.5;
inline constexpr double kSoftminSchedule[] = {0.1, 0.03, 0.01, 0.003};
inline constexpr double kPolishWidths[] = {1e-3, 1e-2, 3e-2};

struct SearchResult {
  Configuration<double> best_config{{Vec2<double>(0, 0)}, RectLattice<double>()};
  double best_value = 0;
  int best_restart = 0;
  std::vector<double> per_restart_values;
  std::vector<int> iterations_used;
  std::vector<bool> converged;
};

/// Restarts of gradient descent on the normalized energy; best = lowest.
SearchResult minimize_energy(const GaussParam<double>& p, const SearchConfig& sc);

/// min over i != j of the nearest-image distance |x_i - x_j|_L.
double packing_radius(const Configuration<double>& cfg);

/// Restarts of softmin ascent, scored by the exact packing radius; best = largest.
SearchResult maximize_packing(const RectLattice<double>& L, const SearchConfig& sc);

/// sqrt((1/2)^2 + (beta/2)^2) for 2m points on r = (1, m beta).
double pigeonhole_bound(const RectLattice<double>& L, int n);

/// Uniform start for restart k: point 0 at the origin, the rest uniform on the cell.
Configuration<double> random_start(const RectLattice<double>& L, int n, std::uint64_t seed, int restart);

}  // namespace torusopt

#endif  // TORUSOPT_SEARCH_HPP
