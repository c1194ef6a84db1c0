#pragma once

// Numerical instantiations of the proof constructions: S-set truncations
// with their d_1 divergence bound, Cauchy tail norms with their analytic
// bounds, the packing family behind the infinite-Assouad-dimension argument,
// and empirical distortion-bound estimates.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdm/diagram.hpp"

namespace pdm {

// ---------------------------------------------------------------------------
// S-set: diagrams over the point sequence p_i = (i, i + 1/i)

PlanePoint s_set_point(std::int64_t i);

// Diagram {p_i : i in support}; support entries must be >= 1.
PersistenceDiagram s_set_diagram(const std::vector<std::int64_t>& support);

struct STruncation {
  std::vector<std::int64_t> support;  // {1, ..., k}
  PersistenceDiagram diagram;
};

STruncation s_truncation(std::int64_t k);

// Diagonal-matching cost between two S-set diagrams: the sum of 1/(2i) over
// the symmetric difference of the supports. Equals d_1 of the two diagrams
// (diagonal matching is optimal; the oracle confirms this at small sizes).
double s_distance_lower_bound(const std::vector<std::int64_t>& support_a,
                              const std::vector<std::int64_t>& support_b);

// ---------------------------------------------------------------------------
// Cauchy tails on the S-set truncations

struct CauchyTail {
  double tail_norm_sq = 0.0;
  double bound = 0.0;
};

// PWG tail |Phi(Dg_q) - Phi(Dg_p)|^2 with weight (y-x)^2, via the closed
// form pi sigma^2 sum_{k,l=p+1}^{q} (1/k^2 l^2) exp(-|p_k - p_l|^2/4sigma^2);
// bound = pi sigma^2 (sum_{k=p+1}^{q} 1/k^2)^2. tail <= bound always.
CauchyTail pwg_cauchy_tail(std::int64_t p, std::int64_t q, double sigma);

// Landscape tail: exact integrals give sum_{k=p+1}^{q} 1/(12 k^3), bounded
// by the coarser tent-area estimate sum_{k=p+1}^{q} 1/(4 k^2).
CauchyTail landscape_cauchy_tail(std::int64_t p, std::int64_t q);

// ---------------------------------------------------------------------------
// Packing family (Assouad-dimension engine)

struct PackingFamily {
  double C = 0.0;
  double alpha = 0.0;
  double L = 0.0;
  double beta = 0.5;
  std::int64_t M = 0;  // 1 + floor(C * beta^-alpha), > C * beta^-alpha
  double r = 0.0;      // 2L / M
  std::vector<PersistenceDiagram> diagrams;  // M single-point diagrams in [-L, L]^2
};

// Throws std::invalid_argument on nonpositive parameters or when M would
// exceed 10^7.
PackingFamily assouad_packing(double C, double alpha, double L);

struct PackingReport {
  std::int64_t M = 0;
  double r = 0.0;
  double beta = 0.5;
  int p = 1;  // p_infinity for bottleneck
  double tolerance = 0.0;
  double expected_to_empty = 0.0;   // r/2
  double expected_pairwise = 0.0;   // 2^{1/p} r/2 (finite p), r/2 (p = inf)
  double max_error_to_empty = 0.0;
  double max_error_pairwise = 0.0;
  double min_pairwise = 0.0;
  double separation_radius = 0.0;   // min_pairwise / 2
  bool to_empty_within_r = false;   // every d_p(empty, D_j) < r
  bool values_match = false;
  bool separates_at_beta_r = false; // min_pairwise >= 2 beta r
  bool pass = false;                // values_match && to_empty_within_r
};

// Checks the family against the proof's stated values with the exact
// solvers; failures are reported, not thrown.
PackingReport verify_packing(const PackingFamily& family, int p, double tolerance = 1e-9);

// ---------------------------------------------------------------------------
// Empirical distortion bounds

struct DistortionEstimate {
  std::string method;
  std::int64_t cardinality_bound = 0;  // smallest N with every diagram in D_N
  double box_bound = 0.0;              // smallest L with every diagram in D^L
  // Ratios rho = hilbert / d_1 over pairs with d_1 > 0.
  double a_hat = 0.0;  // min rho
  double b_hat = 0.0;  // max rho
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  // Reciprocal orientation (d_1 / hilbert), the R_N^L convention: its sup is
  // 1/a_hat and its inf is 1/b_hat; +inf when a ratio is 0.
  double reciprocal_sup = 0.0;
  double reciprocal_inf = 0.0;
  std::size_t pair_count = 0;
  std::size_t skipped_pairs = 0;            // d_1 == 0 and hilbert == 0
  std::size_t injectivity_violations = 0;   // d_1 == 0 but hilbert > 0
};

using HilbertDistanceFn =
    std::function<double(const PersistenceDiagram&, const PersistenceDiagram&)>;

// Ratio statistics over all unordered pairs of the pool. Throws
// std::invalid_argument when fewer than two diagrams are given or when no
// pair has d_1 > 0.
DistortionEstimate empirical_distortion(const std::string& method_id,
                                        const std::vector<PersistenceDiagram>& diagrams,
                                        const HilbertDistanceFn& hilbert_distance);

}  // namespace pdm
