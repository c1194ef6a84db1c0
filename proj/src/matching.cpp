#include "pdm/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pdm {

namespace {

double pow_cost(double base, int p) {
  if (p == 1) return base;
  if (p == 2) return base * base;
  return std::pow(base, p);
}

// Augmented square cost matrix: rows are D1's n points then m diagonal
// slots, columns are D2's m points then n diagonal slots. Any point may
// pair with any diagonal slot; diagonal-to-diagonal costs nothing.
std::vector<std::vector<double>> augmented_costs(const std::vector<PlanePoint>& a,
                                                 const std::vector<PlanePoint>& b,
                                                 int p) {
  const std::size_t n = a.size(), m = b.size(), size = n + m;
  std::vector<std::vector<double>> cost(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      if (i < n && j < m) {
        cost[i][j] = pow_cost(linf_distance(a[i], b[j]), p);
      } else if (i < n) {
        cost[i][j] = pow_cost(diagonal_distance(a[i]), p);
      } else if (j < m) {
        cost[i][j] = pow_cost(diagonal_distance(b[j]), p);
      }
    }
  }
  return cost;
}

// Hungarian algorithm with potentials, O(size^3). Exact minimum assignment
// cost for a square matrix of nonnegative reals.
double min_assignment_cost(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // match[j]: row assigned to column j (1-based)
  std::vector<std::size_t> way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) total += cost[match[j] - 1][j - 1];
  return total;
}

// Kuhn's augmenting-path bipartite matching on the threshold graph: edge
// (i, j) present iff its cost is <= t. Returns true iff a perfect matching
// of the augmented (n+m)-point sides exists.
class ThresholdMatcher {
 public:
  ThresholdMatcher(const std::vector<PlanePoint>& a, const std::vector<PlanePoint>& b)
      : a_(a), b_(b), n_(a.size()), m_(b.size()), size_(n_ + m_) {}

  bool feasible(double t) {
    match_of_col_.assign(size_, npos);
    std::size_t matched = 0;
    for (std::size_t i = 0; i < size_; ++i) {
      visited_.assign(size_, 0);
      if (try_augment(i, t)) ++matched;
    }
    return matched == size_;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  double edge_cost(std::size_t i, std::size_t j) const {
    if (i < n_ && j < m_) return linf_distance(a_[i], b_[j]);
    if (i < n_) return diagonal_distance(a_[i]);
    if (j < m_) return diagonal_distance(b_[j]);
    return 0.0;
  }

  bool try_augment(std::size_t i, double t) {
    for (std::size_t j = 0; j < size_; ++j) {
      if (visited_[j] || edge_cost(i, j) > t) continue;
      visited_[j] = 1;
      if (match_of_col_[j] == npos || try_augment(match_of_col_[j], t)) {
        match_of_col_[j] = i;
        return true;
      }
    }
    return false;
  }

  const std::vector<PlanePoint>& a_;
  const std::vector<PlanePoint>& b_;
  std::size_t n_, m_, size_;
  std::vector<std::size_t> match_of_col_;
  std::vector<char> visited_;
};

// Distances are symmetric; solving every call in a canonical argument order
// makes the computed values exactly symmetric as well.
bool canonical_order(const std::vector<PlanePoint>& a, const std::vector<PlanePoint>& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(), [](const PlanePoint& x, const PlanePoint& y) {
        return x < y;
      });
}

}  // namespace

double matching_cost(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                     const PartialMatching& matching, int p) {
  if (p != p_infinity && p < 1) throw std::invalid_argument("matching_cost: p must be >= 1");
  const std::vector<PlanePoint> a = d1.expanded_points();
  const std::vector<PlanePoint> b = d2.expanded_points();

  std::vector<int> cover_a(a.size(), 0), cover_b(b.size(), 0);
  auto touch = [](std::vector<int>& cover, std::size_t idx, const char* side) {
    if (idx >= cover.size()) {
      throw std::invalid_argument(std::string("matching_cost: index out of range in ") + side);
    }
    if (++cover[idx] > 1) {
      throw std::invalid_argument(std::string("matching_cost: point covered twice in ") + side);
    }
  };
  for (const auto& [i, j] : matching.pairs) {
    touch(cover_a, i, "D1");
    touch(cover_b, j, "D2");
  }
  for (std::size_t i : matching.unmatched_1) touch(cover_a, i, "D1");
  for (std::size_t j : matching.unmatched_2) touch(cover_b, j, "D2");
  if (std::count(cover_a.begin(), cover_a.end(), 1) != static_cast<std::ptrdiff_t>(a.size()) ||
      std::count(cover_b.begin(), cover_b.end(), 1) != static_cast<std::ptrdiff_t>(b.size())) {
    throw std::invalid_argument("matching_cost: matching does not cover every point");
  }

  std::vector<double> terms;
  terms.reserve(matching.pairs.size() + matching.unmatched_1.size() + matching.unmatched_2.size());
  for (const auto& [i, j] : matching.pairs) terms.push_back(linf_distance(a[i], b[j]));
  for (std::size_t i : matching.unmatched_1) terms.push_back(diagonal_distance(a[i]));
  for (std::size_t j : matching.unmatched_2) terms.push_back(diagonal_distance(b[j]));

  if (p == p_infinity) {
    double worst = 0.0;
    for (double t : terms) worst = std::max(worst, t);
    return worst;
  }
  double total = 0.0;
  for (double t : terms) total += pow_cost(t, p);
  return total;
}

double diagram_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2, int p) {
  if (p == p_infinity) return bottleneck_distance(d1, d2);
  if (p < 1) throw std::invalid_argument("diagram_distance: p must be >= 1");
  std::vector<PlanePoint> a = d1.expanded_points();
  std::vector<PlanePoint> b = d2.expanded_points();
  if (a.empty() && b.empty()) return 0.0;
  if (canonical_order(b, a)) std::swap(a, b);
  const double cost = min_assignment_cost(augmented_costs(a, b, p));
  if (p == 1) return cost;
  if (p == 2) return std::sqrt(cost);
  return std::pow(cost, 1.0 / p);
}

double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
  std::vector<PlanePoint> a = d1.expanded_points();
  std::vector<PlanePoint> b = d2.expanded_points();
  if (a.empty() && b.empty()) return 0.0;
  if (canonical_order(b, a)) std::swap(a, b);

  std::vector<double> candidates;
  candidates.reserve(a.size() * b.size() + a.size() + b.size() + 1);
  candidates.push_back(0.0);
  for (const PlanePoint& pa : a) {
    candidates.push_back(diagonal_distance(pa));
    for (const PlanePoint& pb : b) candidates.push_back(linf_distance(pa, pb));
  }
  for (const PlanePoint& pb : b) candidates.push_back(diagonal_distance(pb));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // The optimum is one of the candidate costs; find the smallest feasible one.
  ThresholdMatcher matcher(a, b);
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (matcher.feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

namespace {

// Recursively assign each point of `a` to an unused point of `b` or to the
// diagonal; leftover points of `b` go to the diagonal.
void enumerate_matchings(const std::vector<PlanePoint>& a, const std::vector<PlanePoint>& b,
                         std::size_t next, std::vector<char>& used_b, int p,
                         double partial, double& best) {
  const bool max_mode = (p == p_infinity);
  if (partial >= best) return;
  if (next == a.size()) {
    double total = partial;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used_b[j]) continue;
      const double term = diagonal_distance(b[j]);
      total = max_mode ? std::max(total, term) : total + pow_cost(term, p);
    }
    best = std::min(best, total);
    return;
  }
  {
    const double term = diagonal_distance(a[next]);
    const double acc = max_mode ? std::max(partial, term) : partial + pow_cost(term, p);
    enumerate_matchings(a, b, next + 1, used_b, p, acc, best);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used_b[j]) continue;
    const double term = linf_distance(a[next], b[j]);
    const double acc = max_mode ? std::max(partial, term) : partial + pow_cost(term, p);
    used_b[j] = 1;
    enumerate_matchings(a, b, next + 1, used_b, p, acc, best);
    used_b[j] = 0;
  }
}

}  // namespace

double brute_force_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2, int p) {
  if (p != p_infinity && p < 1) {
    throw std::invalid_argument("brute_force_distance: p must be >= 1");
  }
  if (d1.total_mass() + d2.total_mass() > 10) {
    throw std::invalid_argument("brute_force_distance: instance too large (combined mass > 10)");
  }
  std::vector<PlanePoint> a = d1.expanded_points();
  std::vector<PlanePoint> b = d2.expanded_points();
  if (a.empty() && b.empty()) return 0.0;
  if (canonical_order(b, a)) std::swap(a, b);

  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used_b(b.size(), 0);
  enumerate_matchings(a, b, 0, used_b, p, 0.0, best);
  if (p == p_infinity || p == 1) return best;
  if (p == 2) return std::sqrt(best);
  return std::pow(best, 1.0 / p);
}

double sliced_wasserstein_distance(const PersistenceDiagram& d1,
                                   const PersistenceDiagram& d2,
                                   int n_directions) {
  if (n_directions < 1) {
    throw std::invalid_argument("sliced_wasserstein_distance: n_directions must be >= 1");
  }
  const std::vector<PlanePoint> a = d1.expanded_points();
  const std::vector<PlanePoint> b = d2.expanded_points();

  // Each side is augmented with the other side's diagonal projections, so
  // both projection lists have |D1| + |D2| entries.
  std::vector<PlanePoint> side1 = a;
  for (const PlanePoint& q : b) side1.push_back(diagonal_projection(q));
  std::vector<PlanePoint> side2 = b;
  for (const PlanePoint& q : a) side2.push_back(diagonal_projection(q));

  const std::size_t count = side1.size();
  std::vector<double> proj1(count), proj2(count);
  double total = 0.0;
  for (int k = 0; k < n_directions; ++k) {
    const double theta = -M_PI / 2.0 + M_PI * static_cast<double>(k) / n_directions;
    const double cx = std::cos(theta), cy = std::sin(theta);
    for (std::size_t i = 0; i < count; ++i) {
      proj1[i] = cx * side1[i].birth + cy * side1[i].death;
      proj2[i] = cx * side2[i].birth + cy * side2[i].death;
    }
    std::sort(proj1.begin(), proj1.end());
    std::sort(proj2.begin(), proj2.end());
    double transport = 0.0;
    for (std::size_t i = 0; i < count; ++i) transport += std::abs(proj1[i] - proj2[i]);
    total += transport;
  }
  return total / n_directions;
}

}  // namespace pdm
