#pragma once

// Persistence diagrams as finite multisets of points strictly above the
// diagonal, plus the diagonal geometry and synthetic generators used
// throughout the toolkit.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pdm {

struct PlanePoint {
  double birth = 0.0;
  double death = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

// Lexicographic (birth, death) order; gives diagrams a canonical entry order.
inline bool operator<(const PlanePoint& a, const PlanePoint& b) {
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.death < b.death;
}

// l_inf distance from q to the diagonal {(x, x)}: (death - birth) / 2.
double diagonal_distance(const PlanePoint& q);

// Nearest diagonal point under l_inf: the midpoint ((b+d)/2, (b+d)/2).
PlanePoint diagonal_projection(const PlanePoint& q);

// l_inf distance between two plane points.
double linf_distance(const PlanePoint& a, const PlanePoint& b);

// Membership bounds for the diagram classes: diagrams with total mass < N
// whose support lies inside [-L, L]^2. Either bound may be absent.
struct DiagramClassParams {
  std::optional<std::int64_t> max_points;     // N, >= 1
  std::optional<double> box_half_width;       // L, > 0

  DiagramClassParams(std::optional<std::int64_t> n, std::optional<double> l);
};

// Finite multiset of plane points with death > birth. Entries are kept
// sorted and deduplicated, duplicates merging into the multiplicity, so two
// diagrams are equal iff their entry vectors are identical.
class PersistenceDiagram {
 public:
  struct Entry {
    PlanePoint point;
    int multiplicity = 1;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  PersistenceDiagram() = default;

  // Throws std::invalid_argument on death <= birth or multiplicity < 1.
  explicit PersistenceDiagram(std::vector<Entry> entries);

  static PersistenceDiagram from_points(const std::vector<PlanePoint>& points);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::int64_t total_mass() const { return total_mass_; }

  // Multiplicity-expanded point list, sorted; size == total_mass().
  std::vector<PlanePoint> expanded_points() const;

  // True iff total_mass < N and every coordinate lies within [-L, L],
  // for whichever bounds are present.
  bool in_class(const DiagramClassParams& params) const;

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

 private:
  std::vector<Entry> entries_;
  std::int64_t total_mass_ = 0;
};

// Draws n points i.i.d. uniformly on the open triangle {0 <= x < y <= 1} by
// rejection from the unit square. Deterministic for a given seed, across
// platforms (mt19937_64 with explicit bit-to-double conversion).
PersistenceDiagram sample_uniform_diagram(std::int64_t n, std::uint64_t rng_seed);

}  // namespace pdm
