#include "pdm/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace pdm {

double diagonal_distance(const PlanePoint& q) {
  return (q.death - q.birth) / 2.0;
}

PlanePoint diagonal_projection(const PlanePoint& q) {
  const double mid = (q.birth + q.death) / 2.0;
  return PlanePoint{mid, mid};
}

double linf_distance(const PlanePoint& a, const PlanePoint& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

DiagramClassParams::DiagramClassParams(std::optional<std::int64_t> n,
                                       std::optional<double> l)
    : max_points(n), box_half_width(l) {
  if (max_points && *max_points < 1) {
    throw std::invalid_argument("DiagramClassParams: N must be >= 1");
  }
  if (box_half_width && !(*box_half_width > 0.0)) {
    throw std::invalid_argument("DiagramClassParams: L must be > 0");
  }
}

PersistenceDiagram::PersistenceDiagram(std::vector<Entry> entries) {
  for (const Entry& e : entries) {
    if (!std::isfinite(e.point.birth) || !std::isfinite(e.point.death)) {
      throw std::invalid_argument("PersistenceDiagram: coordinates must be finite");
    }
    if (!(e.point.death > e.point.birth)) {
      throw std::invalid_argument(
          "PersistenceDiagram: death must exceed birth (diagonal points rejected)");
    }
    if (e.multiplicity < 1) {
      throw std::invalid_argument("PersistenceDiagram: multiplicity must be >= 1");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.point < b.point; });
  for (const Entry& e : entries) {
    if (!entries_.empty() && entries_.back().point == e.point) {
      entries_.back().multiplicity += e.multiplicity;
    } else {
      entries_.push_back(e);
    }
    total_mass_ += e.multiplicity;
  }
}

PersistenceDiagram PersistenceDiagram::from_points(const std::vector<PlanePoint>& points) {
  std::vector<Entry> entries;
  entries.reserve(points.size());
  for (const PlanePoint& p : points) entries.push_back(Entry{p, 1});
  return PersistenceDiagram(std::move(entries));
}

std::vector<PlanePoint> PersistenceDiagram::expanded_points() const {
  std::vector<PlanePoint> out;
  out.reserve(static_cast<std::size_t>(total_mass_));
  for (const Entry& e : entries_) {
    for (int i = 0; i < e.multiplicity; ++i) out.push_back(e.point);
  }
  return out;
}

bool PersistenceDiagram::in_class(const DiagramClassParams& params) const {
  if (params.max_points && !(total_mass_ < *params.max_points)) return false;
  if (params.box_half_width) {
    const double L = *params.box_half_width;
    for (const Entry& e : entries_) {
      if (e.point.birth < -L || e.point.birth > L) return false;
      if (e.point.death < -L || e.point.death > L) return false;
    }
  }
  return true;
}

namespace {

// 53-bit uniform double in [0, 1); keeps sampling reproducible across
// standard libraries, unlike std::uniform_real_distribution.
double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PersistenceDiagram sample_uniform_diagram(std::int64_t n, std::uint64_t rng_seed) {
  if (n < 1) throw std::invalid_argument("sample_uniform_diagram: n must be >= 1");
  std::mt19937_64 rng(rng_seed);
  std::vector<PlanePoint> points;
  points.reserve(static_cast<std::size_t>(n));
  while (points.size() < static_cast<std::size_t>(n)) {
    const double x = uniform_unit(rng);
    const double y = uniform_unit(rng);
    if (x < y) points.push_back(PlanePoint{x, y});
  }
  return PersistenceDiagram::from_points(points);
}

}  // namespace pdm
