#pragma once

// Exact p-diagram distances and the bottleneck distance via optimal partial
// matching, a brute-force oracle for small instances, and the Sliced
// Wasserstein distance.

#include <cstddef>
#include <limits>
#include <vector>

#include "pdm/diagram.hpp"

namespace pdm {

// Sentinel for p = infinity in cost exponents (bottleneck convention:
// the cost is the single largest term, not a sum).
inline constexpr int p_infinity = std::numeric_limits<int>::max();

// A partial matching between the multiplicity-expanded point lists of two
// diagrams. Indices in `pairs` refer to positions in expanded_points();
// unmatched points are charged their l_inf distance to the diagonal.
struct PartialMatching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched_1;
  std::vector<std::size_t> unmatched_2;
};

// p-cost of a matching: sum of per-term costs for finite p, maximum single
// term for p_infinity. Throws std::invalid_argument if the matching does not
// cover each point exactly once.
double matching_cost(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                     const PartialMatching& matching, int p);

// Exact d_p: min over partial matchings of c_p^{1/p}, solved as an
// assignment problem on the (n+m) x (n+m) augmented cost matrix.
// p == p_infinity delegates to bottleneck_distance.
double diagram_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2, int p);

// Exact d_inf: binary search over the candidate cost set with a bipartite
// matching feasibility test at each threshold.
double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2);

// Exhaustive minimum over all partial matchings; refuses instances with
// combined mass above 10. Test oracle, independent of the solvers above.
double brute_force_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2, int p);

// Directional approximation of the Sliced Wasserstein distance: both
// diagrams are augmented with the other's diagonal projections, projected
// onto n_directions lines with angles evenly spaced in [-pi/2, pi/2), and
// the sorted projections are compared in L1; the result is the average over
// directions.
double sliced_wasserstein_distance(const PersistenceDiagram& d1,
                                   const PersistenceDiagram& d2,
                                   int n_directions);

inline constexpr int default_sw_directions = 50;

}  // namespace pdm
