#include "pdm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pdm/matching.hpp"

namespace pdm {

PlanePoint s_set_point(std::int64_t i) {
  if (i < 1) throw std::invalid_argument("s_set_point: index must be >= 1");
  const double x = static_cast<double>(i);
  return PlanePoint{x, x + 1.0 / x};
}

PersistenceDiagram s_set_diagram(const std::vector<std::int64_t>& support) {
  std::set<std::int64_t> unique(support.begin(), support.end());
  std::vector<PlanePoint> points;
  points.reserve(unique.size());
  for (std::int64_t i : unique) points.push_back(s_set_point(i));
  return PersistenceDiagram::from_points(points);
}

STruncation s_truncation(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("s_truncation: k must be >= 1");
  STruncation out;
  out.support.reserve(static_cast<std::size_t>(k));
  for (std::int64_t i = 1; i <= k; ++i) out.support.push_back(i);
  out.diagram = s_set_diagram(out.support);
  return out;
}

double s_distance_lower_bound(const std::vector<std::int64_t>& support_a,
                              const std::vector<std::int64_t>& support_b) {
  const std::set<std::int64_t> a(support_a.begin(), support_a.end());
  const std::set<std::int64_t> b(support_b.begin(), support_b.end());
  std::vector<std::int64_t> sym_diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(sym_diff));
  double sum = 0.0;
  for (std::int64_t i : sym_diff) {
    if (i < 1) throw std::invalid_argument("s_distance_lower_bound: indices must be >= 1");
    sum += 0.5 / static_cast<double>(i);
  }
  return sum;
}

CauchyTail pwg_cauchy_tail(std::int64_t p, std::int64_t q, double sigma) {
  if (p < 1 || q <= p) throw std::invalid_argument("pwg_cauchy_tail: need 1 <= p < q");
  if (!(sigma > 0.0)) throw std::invalid_argument("pwg_cauchy_tail: sigma must be > 0");

  // The difference of the two truncation embeddings has atoms p_k with
  // weight 1/k^2 for k = p+1..q. Weights are built directly from the index
  // so that the single-term case meets its bound exactly.
  const std::size_t count = static_cast<std::size_t>(q - p);
  std::vector<double> weight(count);
  std::vector<PlanePoint> center(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const double k = static_cast<double>(p + 1 + static_cast<std::int64_t>(idx));
    weight[idx] = 1.0 / (k * k);
    center[idx] = s_set_point(p + 1 + static_cast<std::int64_t>(idx));
  }

  const double scale = M_PI * sigma * sigma;
  const double inv4s2 = 1.0 / (4.0 * sigma * sigma);
  double sum = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    weight_sum += weight[i];
    for (std::size_t j = 0; j < count; ++j) {
      const double dx = center[i].birth - center[j].birth;
      const double dy = center[i].death - center[j].death;
      const double exponent = (dx * dx + dy * dy) * inv4s2;
      if (exponent > 1500.0) continue;  // exp underflows to exactly 0
      sum += weight[i] * weight[j] * std::exp(-exponent);
    }
  }
  CauchyTail out;
  out.tail_norm_sq = scale * sum;
  out.bound = scale * (weight_sum * weight_sum);
  return out;
}

CauchyTail landscape_cauchy_tail(std::int64_t p, std::int64_t q) {
  if (p < 1 || q <= p) throw std::invalid_argument("landscape_cauchy_tail: need 1 <= p < q");
  CauchyTail out;
  for (std::int64_t k = p + 1; k <= q; ++k) {
    const double kd = static_cast<double>(k);
    out.tail_norm_sq += 1.0 / (12.0 * kd * kd * kd);
    out.bound += 1.0 / (4.0 * kd * kd);
  }
  return out;
}

PackingFamily assouad_packing(double C, double alpha, double L) {
  if (!(C > 0.0)) throw std::invalid_argument("assouad_packing: C must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("assouad_packing: alpha must be > 0");
  if (!(L > 0.0)) throw std::invalid_argument("assouad_packing: L must be > 0");

  PackingFamily family;
  family.C = C;
  family.alpha = alpha;
  family.L = L;
  family.beta = 0.5;
  const double scaled = C * std::pow(1.0 / family.beta, alpha);
  if (!(scaled <= 1e7)) {
    throw std::invalid_argument(
        "assouad_packing: C * beta^-alpha exceeds 1e7; refusing to build the family");
  }
  family.M = 1 + static_cast<std::int64_t>(std::floor(scaled));
  family.r = 2.0 * L / static_cast<double>(family.M);

  // Coordinates via (2L j)/M rather than j * r so that the family's extreme
  // coordinates land exactly on the [-L, L] box boundary.
  const double m = static_cast<double>(family.M);
  family.diagrams.reserve(static_cast<std::size_t>(family.M));
  for (std::int64_t j = 0; j < family.M; ++j) {
    const double birth = -L + (2.0 * L * static_cast<double>(j)) / m;
    const double death = -L + (2.0 * L * static_cast<double>(j + 1)) / m;
    family.diagrams.push_back(PersistenceDiagram::from_points({PlanePoint{birth, death}}));
  }
  return family;
}

PackingReport verify_packing(const PackingFamily& family, int p, double tolerance) {
  PackingReport report;
  report.M = family.M;
  report.r = family.r;
  report.beta = family.beta;
  report.p = p;
  report.tolerance = tolerance;
  report.expected_to_empty = family.r / 2.0;
  report.expected_pairwise = (p == p_infinity)
                                 ? family.r / 2.0
                                 : std::pow(2.0, 1.0 / p) * family.r / 2.0;

  const PersistenceDiagram empty;
  report.to_empty_within_r = true;
  for (const PersistenceDiagram& d : family.diagrams) {
    const double measured = diagram_distance(empty, d, p);
    report.max_error_to_empty =
        std::max(report.max_error_to_empty, std::abs(measured - report.expected_to_empty));
    if (!(measured < family.r)) report.to_empty_within_r = false;
  }

  report.min_pairwise = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.diagrams.size(); ++i) {
    for (std::size_t j = i + 1; j < family.diagrams.size(); ++j) {
      const double measured = diagram_distance(family.diagrams[i], family.diagrams[j], p);
      report.max_error_pairwise =
          std::max(report.max_error_pairwise, std::abs(measured - report.expected_pairwise));
      report.min_pairwise = std::min(report.min_pairwise, measured);
    }
  }
  if (family.diagrams.size() < 2) report.min_pairwise = 0.0;
  report.separation_radius = report.min_pairwise / 2.0;
  report.separates_at_beta_r = report.min_pairwise >= 2.0 * family.beta * family.r - tolerance;
  report.values_match = report.max_error_to_empty <= tolerance &&
                        report.max_error_pairwise <= tolerance;
  report.pass = report.values_match && report.to_empty_within_r;
  return report;
}

DistortionEstimate empirical_distortion(const std::string& method_id,
                                        const std::vector<PersistenceDiagram>& diagrams,
                                        const HilbertDistanceFn& hilbert_distance) {
  if (diagrams.size() < 2) {
    throw std::invalid_argument("empirical_distortion: need at least two diagrams");
  }
  DistortionEstimate est;
  est.method = method_id;
  for (const PersistenceDiagram& d : diagrams) {
    est.cardinality_bound = std::max(est.cardinality_bound, d.total_mass() + 1);
    for (const auto& e : d.entries()) {
      est.box_bound = std::max({est.box_bound, std::abs(e.point.birth), std::abs(e.point.death)});
    }
  }

  std::vector<double> ratios;
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    for (std::size_t j = i + 1; j < diagrams.size(); ++j) {
      const double d1 = diagram_distance(diagrams[i], diagrams[j], 1);
      const double dh = hilbert_distance(diagrams[i], diagrams[j]);
      if (d1 == 0.0) {
        if (dh > 0.0) {
          ++est.injectivity_violations;
        } else {
          ++est.skipped_pairs;
        }
        continue;
      }
      ratios.push_back(dh / d1);
    }
  }
  if (ratios.empty()) {
    throw std::invalid_argument("empirical_distortion: no pair with d_1 > 0");
  }
  std::sort(ratios.begin(), ratios.end());
  est.pair_count = ratios.size();
  est.a_hat = ratios.front();
  est.b_hat = ratios.back();
  const auto at_quantile = [&ratios](double q) {
    const double h = q * static_cast<double>(ratios.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= ratios.size()) return ratios.back();
    return ratios[lo] + (h - static_cast<double>(lo)) * (ratios[lo + 1] - ratios[lo]);
  };
  est.q1 = at_quantile(0.25);
  est.median = at_quantile(0.5);
  est.q3 = at_quantile(0.75);
  est.reciprocal_sup = est.a_hat > 0.0 ? 1.0 / est.a_hat
                                       : std::numeric_limits<double>::infinity();
  est.reciprocal_inf = est.b_hat > 0.0 ? 1.0 / est.b_hat
                                       : std::numeric_limits<double>::infinity();
  return est;
}

}  // namespace pdm
