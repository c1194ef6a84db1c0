#include "pdm/feature_maps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdm {

namespace {

struct Tent {
  double u, v, mid, peak;  // support [u, v], apex (mid, peak), slopes +-1

  explicit Tent(const PlanePoint& p)
      : u(p.birth), v(p.death), mid((p.birth + p.death) / 2.0),
        peak((p.death - p.birth) / 2.0) {}

  double value_at(double t) const {
    return std::max(0.0, peak - std::abs(t - mid));
  }
};

void append_knot(LandscapeEnvelope& env, double t, double value) {
  if (!env.empty() && env.back().t == t) return;
  env.push_back(LandscapeKnot{t, value});
}

// Identity of the line a k-th maximum follows on an interval: a tent side
// (rising or falling) or the zero line. Knots are emitted only where this
// changes, which keeps envelopes at their true breakpoint complexity.
struct AttainingLine {
  std::size_t tent = 0;
  int side = 0;  // 0: zero line, 1: rising, 2: falling

  friend bool operator==(const AttainingLine&, const AttainingLine&) = default;
};

void trim_zero_tails(LandscapeEnvelope& env) {
  std::size_t first = 0;
  while (first + 1 < env.size() && env[first].value == 0.0 && env[first + 1].value == 0.0) {
    ++first;
  }
  std::size_t last = env.size();
  while (last >= 2 && env[last - 1].value == 0.0 && env[last - 2].value == 0.0) {
    --last;
  }
  if (first > 0 || last < env.size()) {
    env = LandscapeEnvelope(env.begin() + first, env.begin() + last);
  }
  const bool all_zero = std::all_of(env.begin(), env.end(),
                                    [](const LandscapeKnot& k) { return k.value == 0.0; });
  if (all_zero) env.clear();
}

}  // namespace

double LandscapeProfile::evaluate(int k, double t) const {
  if (k < 1 || k > k_max()) throw std::invalid_argument("LandscapeProfile: k out of range");
  const LandscapeEnvelope& env = envelopes[static_cast<std::size_t>(k - 1)];
  if (env.size() < 2 || t <= env.front().t || t >= env.back().t) {
    if (!env.empty() && t == env.front().t) return env.front().value;
    if (!env.empty() && t == env.back().t) return env.back().value;
    return 0.0;
  }
  const auto it = std::upper_bound(env.begin(), env.end(), t,
                                   [](double x, const LandscapeKnot& k2) { return x < k2.t; });
  const LandscapeKnot& hi = *it;
  const LandscapeKnot& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.value + w * (hi.value - lo.value);
}

LandscapeProfile landscape_profile(const PersistenceDiagram& diagram, int k_max) {
  if (k_max < 1) throw std::invalid_argument("landscape_profile: k_max must be >= 1");
  LandscapeProfile profile;
  profile.envelopes.assign(static_cast<std::size_t>(k_max), {});

  const std::vector<PlanePoint> points = diagram.expanded_points();
  if (points.empty()) return profile;
  std::vector<Tent> tents;
  tents.reserve(points.size());
  for (const PlanePoint& p : points) tents.emplace_back(p);

  // Candidate breakpoints: tent knots plus crossings between a rising side
  // (slope +1, of tent i) and a falling side (slope -1, of tent j). Between
  // consecutive candidates no two tents cross, so every k-th maximum is
  // linear there.
  std::vector<double> grid;
  grid.reserve(tents.size() * 3);
  for (const Tent& t : tents) {
    grid.push_back(t.u);
    grid.push_back(t.mid);
    grid.push_back(t.v);
  }
  for (std::size_t i = 0; i < tents.size(); ++i) {
    for (std::size_t j = 0; j < tents.size(); ++j) {
      if (i == j) continue;
      const double t = (tents[i].u + tents[j].v) / 2.0;
      if (t >= tents[i].u && t <= tents[i].mid && t >= tents[j].mid && t <= tents[j].v) {
        grid.push_back(t);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 2) return profile;

  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(k_max), tents.size());
  std::vector<double> values(tents.size());
  const auto kth_value_at = [&](double t, std::size_t k) {
    if (k >= tents.size()) return 0.0;
    for (std::size_t i = 0; i < tents.size(); ++i) values[i] = tents[i].value_at(t);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k),
                     values.end(), std::greater<double>());
    return values[k];
  };

  // Ranked lines per interval, evaluated at the midpoint; no two tents cross
  // inside an interval, so the ranking is constant there. Ties are broken by
  // tent index, which is stable across intervals for coincident lines.
  std::vector<std::pair<double, std::size_t>> ranked(tents.size());
  std::vector<AttainingLine> current(static_cast<std::size_t>(k_max));
  std::vector<AttainingLine> previous(static_cast<std::size_t>(k_max));
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    const double t_mid = grid[g] + (grid[g + 1] - grid[g]) / 2.0;
    for (std::size_t i = 0; i < tents.size(); ++i) {
      ranked[i] = {tents[i].value_at(t_mid), i};
    }
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(top),
                      ranked.end(), [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return a.second < b.second;
                      });
    for (std::size_t k = 0; k < static_cast<std::size_t>(k_max); ++k) {
      if (k < top && ranked[k].first > 0.0) {
        const std::size_t i = ranked[k].second;
        current[k] = AttainingLine{i, t_mid < tents[i].mid ? 1 : 2};
      } else {
        current[k] = AttainingLine{};
      }
      if (g == 0 || !(current[k] == previous[k])) {
        append_knot(profile.envelopes[k], grid[g], kth_value_at(grid[g], k));
      }
      previous[k] = current[k];
    }
  }
  for (std::size_t k = 0; k < static_cast<std::size_t>(k_max); ++k) {
    append_knot(profile.envelopes[k], grid.back(), kth_value_at(grid.back(), k));
  }
  for (LandscapeEnvelope& env : profile.envelopes) trim_zero_tails(env);
  return profile;
}

double landscape_l2_distance(const LandscapeProfile& p1, const LandscapeProfile& p2) {
  if (p1.k_max() != p2.k_max()) {
    throw std::invalid_argument("landscape_l2_distance: profiles must share k_max");
  }
  double sum_sq = 0.0;
  for (int k = 1; k <= p1.k_max(); ++k) {
    const LandscapeEnvelope& e1 = p1.envelopes[static_cast<std::size_t>(k - 1)];
    const LandscapeEnvelope& e2 = p2.envelopes[static_cast<std::size_t>(k - 1)];
    std::vector<double> grid;
    grid.reserve(e1.size() + e2.size());
    for (const LandscapeKnot& kn : e1) grid.push_back(kn.t);
    for (const LandscapeKnot& kn : e2) grid.push_back(kn.t);
    if (grid.empty()) continue;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    // The difference is linear between merged grid points:
    // integral of the square over [a, b] is (b-a)(da^2 + da db + db^2)/3.
    double prev_t = grid.front();
    double prev_d = p1.evaluate(k, prev_t) - p2.evaluate(k, prev_t);
    for (std::size_t g = 1; g < grid.size(); ++g) {
      const double t = grid[g];
      const double d = p1.evaluate(k, t) - p2.evaluate(k, t);
      sum_sq += (t - prev_t) * (prev_d * prev_d + prev_d * d + d * d) / 3.0;
      prev_t = t;
      prev_d = d;
    }
  }
  return std::sqrt(std::max(0.0, sum_sq));
}

WeightFunction weight_function_from_id(const std::string& id) {
  if (id == "persistence_squared") return WeightFunction::persistence_squared;
  if (id == "persistence") return WeightFunction::persistence;
  if (id == "arctan_persistence") return WeightFunction::arctan_persistence;
  if (id == "constant_one") return WeightFunction::constant_one;
  throw std::invalid_argument("unknown weight function id '" + id + "'");
}

std::string weight_function_id(WeightFunction w) {
  switch (w) {
    case WeightFunction::persistence_squared: return "persistence_squared";
    case WeightFunction::persistence: return "persistence";
    case WeightFunction::arctan_persistence: return "arctan_persistence";
    case WeightFunction::constant_one: return "constant_one";
  }
  throw std::logic_error("unreachable");
}

double evaluate_weight(WeightFunction w, const PlanePoint& p) {
  const double persistence = p.death - p.birth;
  switch (w) {
    case WeightFunction::persistence_squared: return persistence * persistence;
    case WeightFunction::persistence: return persistence;
    case WeightFunction::arctan_persistence: return std::atan(persistence);
    case WeightFunction::constant_one: return 1.0;
  }
  throw std::logic_error("unreachable");
}

GaussianSumEmbedding pwg_embedding(const PersistenceDiagram& diagram,
                                   WeightFunction weight, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("pwg_embedding: sigma must be > 0");
  GaussianSumEmbedding e;
  e.bandwidth = sigma;
  e.atoms.reserve(diagram.entries().size());
  for (const auto& entry : diagram.entries()) {
    e.atoms.push_back(GaussianAtom{entry.point,
                                   evaluate_weight(weight, entry.point) * entry.multiplicity});
  }
  return e;
}

GaussianSumEmbedding pss_embedding(const PersistenceDiagram& diagram, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("pss_embedding: sigma must be > 0");
  GaussianSumEmbedding e;
  e.bandwidth = sigma;
  e.atoms.reserve(diagram.entries().size() * 2);
  for (const auto& entry : diagram.entries()) {
    const double w = static_cast<double>(entry.multiplicity);
    e.atoms.push_back(GaussianAtom{entry.point, w});
    e.atoms.push_back(GaussianAtom{PlanePoint{entry.point.death, entry.point.birth}, -w});
  }
  return e;
}

namespace {

// Merge atoms sharing a center and drop exact zeros, so that shared atoms of
// a signed difference cancel symbolically rather than through the double sum.
std::vector<GaussianAtom> merged_atoms(std::vector<GaussianAtom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const GaussianAtom& a, const GaussianAtom& b) {
    return a.center < b.center;
  });
  std::vector<GaussianAtom> out;
  out.reserve(atoms.size());
  for (const GaussianAtom& a : atoms) {
    if (!out.empty() && out.back().center == a.center) {
      out.back().weight += a.weight;
    } else {
      out.push_back(a);
    }
  }
  std::erase_if(out, [](const GaussianAtom& a) { return a.weight == 0.0; });
  return out;
}

double gaussian_sum_norm_sq(const std::vector<GaussianAtom>& atoms, double sigma) {
  const double inv4s2 = 1.0 / (4.0 * sigma * sigma);
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const double dx = atoms[i].center.birth - atoms[j].center.birth;
      const double dy = atoms[i].center.death - atoms[j].center.death;
      sum += atoms[i].weight * atoms[j].weight * std::exp(-(dx * dx + dy * dy) * inv4s2);
    }
  }
  return M_PI * sigma * sigma * sum;
}

}  // namespace

double gaussian_sum_l2_norm(const GaussianSumEmbedding& e) {
  return std::sqrt(std::max(0.0, gaussian_sum_norm_sq(merged_atoms(e.atoms), e.bandwidth)));
}

double gaussian_sum_l2_distance(const GaussianSumEmbedding& e1, const GaussianSumEmbedding& e2) {
  if (e1.bandwidth != e2.bandwidth) {
    throw std::invalid_argument("gaussian_sum_l2_distance: bandwidth mismatch");
  }
  std::vector<GaussianAtom> diff = e1.atoms;
  diff.reserve(e1.atoms.size() + e2.atoms.size());
  for (const GaussianAtom& a : e2.atoms) diff.push_back(GaussianAtom{a.center, -a.weight});
  return std::sqrt(std::max(0.0, gaussian_sum_norm_sq(merged_atoms(std::move(diff)), e1.bandwidth)));
}

FiniteVector persistence_image(const PersistenceDiagram& diagram, int resolution,
                               double sigma, WeightFunction weight) {
  if (resolution < 1) throw std::invalid_argument("persistence_image: resolution must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("persistence_image: sigma must be > 0");
  FiniteVector out;
  out.descriptor = "image:" + std::to_string(resolution) + "x" + std::to_string(resolution);
  out.entries.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);

  const double norm = 1.0 / (2.0 * M_PI * sigma * sigma);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  for (const auto& entry : diagram.entries()) {
    const double w = evaluate_weight(weight, entry.point) * entry.multiplicity;
    if (w == 0.0) continue;
    const double px = entry.point.birth;
    const double py = entry.point.death - entry.point.birth;
    for (int r = 0; r < resolution; ++r) {
      const double cy = (r + 0.5) / resolution;
      for (int c = 0; c < resolution; ++c) {
        const double cx = (c + 0.5) / resolution;
        const double dx = cx - px, dy = cy - py;
        out.entries[static_cast<std::size_t>(r) * resolution + c] +=
            w * norm * std::exp(-(dx * dx + dy * dy) * inv2s2);
      }
    }
  }
  return out;
}

FiniteVector topological_vector(const PersistenceDiagram& diagram, int m) {
  if (m < 1) throw std::invalid_argument("topological_vector: m must be >= 1");
  const std::vector<PlanePoint> points = diagram.expanded_points();
  std::vector<double> values;
  values.reserve(points.size() * (points.size() + 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      values.push_back(std::min({linf_distance(points[i], points[j]),
                                 diagonal_distance(points[i]),
                                 diagonal_distance(points[j])}));
    }
  }
  std::sort(values.begin(), values.end(), std::greater<double>());
  values.resize(static_cast<std::size_t>(m), 0.0);

  FiniteVector out;
  out.descriptor = "tv:" + std::to_string(m);
  out.entries = std::move(values);
  return out;
}

double euclidean_distance(const FiniteVector& v1, const FiniteVector& v2) {
  if (v1.entries.size() != v2.entries.size()) {
    throw std::invalid_argument("euclidean_distance: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < v1.entries.size(); ++i) {
    const double d = v1.entries[i] - v2.entries[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace pdm
