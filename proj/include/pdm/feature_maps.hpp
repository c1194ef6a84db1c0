#pragma once

// The five diagram vectorizations with exact or closed-form Hilbert-space
// distances: Landscape, Persistence Weighted Gaussian, Persistence Scale
// Space, Persistence Image, Topological Vector.

#include <string>
#include <vector>

#include "pdm/diagram.hpp"

namespace pdm {

// ---------------------------------------------------------------------------
// Landscapes

struct LandscapeKnot {
  double t = 0.0;
  double value = 0.0;
};

// One piecewise-linear envelope: sorted knots, value 0 outside [front.t,
// back.t], linear interpolation between knots.
using LandscapeEnvelope = std::vector<LandscapeKnot>;

// The ordered envelopes lambda_1 >= lambda_2 >= ... >= 0; the Hilbert image
// stacks envelope k on the x-strip (k-1, k], so the stacked L2 distance is
// the sum over k of the envelope L2 distances.
struct LandscapeProfile {
  std::vector<LandscapeEnvelope> envelopes;

  int k_max() const { return static_cast<int>(envelopes.size()); }
  double evaluate(int k, double t) const;  // k is 1-based
};

// Exact upper-k envelopes of the tent functions
// phi_p(t) = max(0, (death-birth)/2 - |t - (birth+death)/2|),
// computed by a sweep over tent breakpoints and pairwise crossings.
LandscapeProfile landscape_profile(const PersistenceDiagram& diagram, int k_max);

// sqrt(sum_k integral (lambda_k^1 - lambda_k^2)^2 dt), integrated exactly
// over the merged breakpoint grid. Profiles must share k_max.
double landscape_l2_distance(const LandscapeProfile& p1, const LandscapeProfile& p2);

// ---------------------------------------------------------------------------
// Gaussian-sum embeddings (PWG, PSS)

struct GaussianAtom {
  PlanePoint center;
  double weight = 0.0;
};

// Symbolic weighted Gaussian mixture sum_i w_i exp(-|x - c_i|^2 / 2 sigma^2).
struct GaussianSumEmbedding {
  std::vector<GaussianAtom> atoms;
  double bandwidth = 1.0;
};

// Weight functions selected by identifier; persistence_squared is the
// default used in the theory checks.
enum class WeightFunction {
  persistence_squared,  // (y - x)^2
  persistence,          // y - x
  arctan_persistence,   // atan(y - x)
  constant_one,
};

WeightFunction weight_function_from_id(const std::string& id);
std::string weight_function_id(WeightFunction w);
double evaluate_weight(WeightFunction w, const PlanePoint& p);

GaussianSumEmbedding pwg_embedding(const PersistenceDiagram& diagram,
                                   WeightFunction weight, double sigma);

// Atoms at each point with weight +mult and at its diagonal mirror (y, x)
// with weight -mult.
GaussianSumEmbedding pss_embedding(const PersistenceDiagram& diagram, double sigma);

// Exact L2(R^2) norm of a mixture:
// |E|^2 = pi sigma^2 sum_{i,j} w_i w_j exp(-|c_i - c_j|_2^2 / 4 sigma^2).
double gaussian_sum_l2_norm(const GaussianSumEmbedding& e);

// Exact L2(R^2) distance, computed on the signed difference of atom lists.
// Throws std::invalid_argument on bandwidth mismatch.
double gaussian_sum_l2_distance(const GaussianSumEmbedding& e1, const GaussianSumEmbedding& e2);

// ---------------------------------------------------------------------------
// Finite-dimensional vectorizations

struct FiniteVector {
  std::vector<double> entries;
  std::string descriptor;  // provenance, e.g. "image:10x10" or "tv:10"
};

// Birth-persistence Gaussian pixel grid over [0,1]^2: pixel (row r, col c)
// has center ((c+0.5)/res, (r+0.5)/res) and value
// sum_points weight(point) * mult * G_sigma(center - (birth, death-birth)),
// with G_sigma the unit-mass 2-D Gaussian density. Row-major entries.
FiniteVector persistence_image(const PersistenceDiagram& diagram, int resolution,
                               double sigma, WeightFunction weight);

// Descending sorted vector of min(|p_i - p_j|_inf, d(p_i, diag), d(p_j, diag))
// over unordered point pairs (multiplicity-expanded), truncated or
// zero-padded to length m.
FiniteVector topological_vector(const PersistenceDiagram& diagram, int m);

// Plain l2 distance; throws std::invalid_argument on length mismatch.
double euclidean_distance(const FiniteVector& v1, const FiniteVector& v2);

}  // namespace pdm
