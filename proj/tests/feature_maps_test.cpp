#include "pdm/feature_maps.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "pdm/matching.hpp"
#include "pdm/theory.hpp"
#include "quadrature_oracle.hpp"
#include "test_util.hpp"

using namespace pdm;

namespace {

double envelope_integral(const LandscapeEnvelope& env) {
  double sum = 0.0;
  for (std::size_t i = 1; i < env.size(); ++i) {
    sum += (env[i].t - env[i - 1].t) * (env[i].value + env[i - 1].value) / 2.0;
  }
  return sum;
}

PersistenceDiagram shuffled_copy(const PersistenceDiagram& d, std::mt19937_64& rng) {
  std::vector<PlanePoint> points = d.expanded_points();
  std::shuffle(points.begin(), points.end(), rng);
  return PersistenceDiagram::from_points(points);
}

}  // namespace

TEST_CASE("landscape: single tent") {
  const PersistenceDiagram d = PersistenceDiagram::from_points({PlanePoint{0.0, 1.0}});
  const LandscapeProfile profile = landscape_profile(d, 2);
  CHECK(profile.k_max() == 2);
  CHECK(profile.evaluate(1, 0.5) == 0.5);
  CHECK(profile.evaluate(1, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(profile.evaluate(1, 0.0) == 0.0);
  CHECK(profile.evaluate(1, 1.0) == 0.0);
  CHECK(profile.evaluate(1, -3.0) == 0.0);
  CHECK(profile.envelopes[1].empty());  // lambda_2 is identically zero
  CHECK(profile.evaluate(2, 0.5) == 0.0);
  CHECK_THROWS_AS(profile.evaluate(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(landscape_profile(d, 0), std::invalid_argument);
}

TEST_CASE("landscape: S-set truncation has one nonzero envelope") {
  const PersistenceDiagram u4 = s_truncation(4).diagram;
  const LandscapeProfile profile = landscape_profile(u4, 3);
  // Tents sit on disjoint supports [i, i + 1/i]; lambda_1 is their sum and
  // every deeper envelope vanishes.
  for (int i = 1; i <= 4; ++i) {
    const double apex = i + 1.0 / (2.0 * i);
    CHECK(profile.evaluate(1, apex) == doctest::Approx(1.0 / (2.0 * i)).epsilon(1e-12));
  }
  CHECK(profile.envelopes[1].empty());
  CHECK(profile.envelopes[2].empty());

  // integral of lambda_1 = sum of tent areas = sum 1/(4 i^2).
  double expected_area = 0.0;
  for (int i = 1; i <= 4; ++i) expected_area += 1.0 / (4.0 * i * i);
  CHECK(envelope_integral(profile.envelopes[0]) ==
        doctest::Approx(expected_area).epsilon(1e-12));
}

TEST_CASE("landscape: multiplicity repeats envelopes") {
  const PersistenceDiagram d({{PlanePoint{0.0, 2.0}, 2}});
  const LandscapeProfile profile = landscape_profile(d, 3);
  REQUIRE(profile.envelopes[0].size() == profile.envelopes[1].size());
  for (std::size_t i = 0; i < profile.envelopes[0].size(); ++i) {
    CHECK(profile.envelopes[0][i].t == profile.envelopes[1][i].t);
    CHECK(profile.envelopes[0][i].value == profile.envelopes[1][i].value);
  }
  CHECK(profile.evaluate(1, 1.0) == 1.0);
  CHECK(profile.evaluate(2, 1.0) == 1.0);
  CHECK(profile.envelopes[2].empty());
}

TEST_CASE("landscape: envelope ordering and unit slopes") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const PersistenceDiagram d = pdm_test::random_diagram(rng, 12);
    const LandscapeProfile profile = landscape_profile(d, 4);
    for (int k = 1; k < 4; ++k) {
      for (int s = 0; s <= 100; ++s) {
        const double t = s / 100.0;
        CHECK(profile.evaluate(k, t) >= profile.evaluate(k + 1, t) - 1e-12);
      }
    }
    for (const LandscapeEnvelope& env : profile.envelopes) {
      for (std::size_t i = 1; i < env.size(); ++i) {
        const double slope = (env[i].value - env[i - 1].value) / (env[i].t - env[i - 1].t);
        const bool unit = std::abs(slope) <= 1e-9 || std::abs(std::abs(slope) - 1.0) <= 1e-9;
        CHECK(unit);
      }
    }
  }
}

TEST_CASE("landscape: pointwise stability against bottleneck distance") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const PersistenceDiagram a = pdm_test::random_diagram_up_to(rng, 20);
    const PersistenceDiagram b = pdm_test::random_diagram_up_to(rng, 20);
    const double dinf = bottleneck_distance(a, b);
    const LandscapeProfile pa = landscape_profile(a, 3);
    const LandscapeProfile pb = landscape_profile(b, 3);
    for (int k = 1; k <= 3; ++k) {
      for (int s = 0; s <= 240; ++s) {
        const double t = -0.1 + 1.2 * s / 240.0;
        CHECK(std::abs(pa.evaluate(k, t) - pb.evaluate(k, t)) <= dinf + 1e-9);
      }
    }
  }
}

TEST_CASE("landscape L2 distance: exact integration vs dense grid") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    const PersistenceDiagram a = pdm_test::random_diagram(rng, 1 + static_cast<int>(rng() % 10));
    const PersistenceDiagram b = pdm_test::random_diagram(rng, 1 + static_cast<int>(rng() % 10));
    const LandscapeProfile pa = landscape_profile(a, 5);
    const LandscapeProfile pb = landscape_profile(b, 5);
    const double exact = landscape_l2_distance(pa, pb);
    const double grid = pdm_test::grid_landscape_distance(pa, pb, 2e-5);
    CHECK(exact == doctest::Approx(grid).epsilon(1e-5));
  }

  const LandscapeProfile p = landscape_profile(sample_uniform_diagram(8, 4), 3);
  CHECK(landscape_l2_distance(p, p) == 0.0);
  const LandscapeProfile q = landscape_profile(sample_uniform_diagram(8, 4), 4);
  CHECK_THROWS_AS(landscape_l2_distance(p, q), std::invalid_argument);
}

TEST_CASE("landscape L2 on S-set truncations matches the symbolic integrals") {
  // |Phi_L(Dg_q) - Phi_L(Dg_p)|^2 = sum_{k=p+1}^{q} 1/(12 k^3).
  for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 2}, {2, 5}, {3, 9}}) {
    const LandscapeProfile prof_p = landscape_profile(s_truncation(p).diagram, 2);
    const LandscapeProfile prof_q = landscape_profile(s_truncation(q).diagram, 2);
    const double dist = landscape_l2_distance(prof_p, prof_q);
    double expected_sq = 0.0;
    for (int k = p + 1; k <= q; ++k) expected_sq += 1.0 / (12.0 * k * k * k);
    CHECK(dist * dist == doctest::Approx(expected_sq).epsilon(1e-9));
  }
}

TEST_CASE("landscape and TV: translation along the diagonal") {
  std::mt19937_64 rng(83);
  const PersistenceDiagram d = pdm_test::random_diagram(rng, 8);
  const double shift = 0.75;
  std::vector<PlanePoint> moved;
  for (const PlanePoint& p : d.expanded_points()) {
    moved.push_back(PlanePoint{p.birth + shift, p.death + shift});
  }
  const PersistenceDiagram d_shift = PersistenceDiagram::from_points(moved);

  const LandscapeProfile base = landscape_profile(d, 3);
  const LandscapeProfile shifted = landscape_profile(d_shift, 3);
  for (int k = 1; k <= 3; ++k) {
    for (int s = 0; s <= 60; ++s) {
      const double t = s / 60.0;
      CHECK(std::abs(shifted.evaluate(k, t + shift) - base.evaluate(k, t)) <= 1e-12);
    }
  }

  const FiniteVector tv_base = topological_vector(d, 10);
  const FiniteVector tv_shift = topological_vector(d_shift, 10);
  for (std::size_t i = 0; i < tv_base.entries.size(); ++i) {
    CHECK(std::abs(tv_base.entries[i] - tv_shift.entries[i]) <= 1e-12);
  }
}

TEST_CASE("pwg embedding: weights and multiplicities") {
  const PersistenceDiagram d = PersistenceDiagram::from_points({PlanePoint{3.0, 3.0 + 1.0 / 3.0}});
  const GaussianSumEmbedding e = pwg_embedding(d, WeightFunction::persistence_squared, 1.0);
  REQUIRE(e.atoms.size() == 1);
  CHECK(e.atoms[0].weight == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

  CHECK(pwg_embedding(PersistenceDiagram(), WeightFunction::persistence, 1.0).atoms.empty());

  const PersistenceDiagram twice({{PlanePoint{0.2, 0.9}, 2}});
  const PersistenceDiagram once({{PlanePoint{0.2, 0.9}, 1}});
  const double w2 = pwg_embedding(twice, WeightFunction::persistence, 0.5).atoms[0].weight;
  const double w1 = pwg_embedding(once, WeightFunction::persistence, 0.5).atoms[0].weight;
  CHECK(w2 == 2.0 * w1);

  CHECK_THROWS_AS(weight_function_from_id("no_such_weight"), std::invalid_argument);
  CHECK_THROWS_AS(pwg_embedding(once, WeightFunction::persistence, 0.0), std::invalid_argument);
  CHECK(weight_function_from_id(weight_function_id(WeightFunction::arctan_persistence)) ==
        WeightFunction::arctan_persistence);
}

TEST_CASE("gaussian closed form: single atom and quadrature cross-check") {
  GaussianSumEmbedding e;
  e.bandwidth = 0.8;
  e.atoms = {GaussianAtom{PlanePoint{0.3, 0.9}, 1.7}};
  const double expected = std::sqrt(M_PI * 0.8 * 0.8 * 1.7 * 1.7);
  CHECK(gaussian_sum_l2_norm(e) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(pdm_test::quadrature_norm_sq(e.atoms, e.bandwidth, 1e-8) ==
        doctest::Approx(M_PI * 0.8 * 0.8 * 1.7 * 1.7).epsilon(1e-6));

  const GaussianSumEmbedding same = e;
  CHECK(gaussian_sum_l2_distance(e, same) == 0.0);

  GaussianSumEmbedding other;
  other.bandwidth = 1.0;
  CHECK_THROWS_AS(gaussian_sum_l2_distance(e, other), std::invalid_argument);
}

TEST_CASE("gaussian closed form agrees with quadrature on random embeddings") {
  std::mt19937_64 rng(97);
  const double sigmas[] = {0.5, 1.0, 2.0};
  for (int trial = 0; trial < 9; ++trial) {
    const double sigma = sigmas[trial % 3];
    GaussianSumEmbedding e1, e2;
    e1.bandwidth = e2.bandwidth = sigma;
    const auto fill = [&rng](GaussianSumEmbedding& e) {
      const int atoms = 1 + static_cast<int>(rng() % 5);
      for (int a = 0; a < atoms; ++a) {
        e.atoms.push_back(GaussianAtom{
            PlanePoint{pdm_test::uniform_unit(rng), pdm_test::uniform_unit(rng)},
            2.0 * pdm_test::uniform_unit(rng) - 1.0});
      }
    };
    fill(e1);
    fill(e2);
    const double closed = gaussian_sum_l2_distance(e1, e2);
    const double quad = pdm_test::quadrature_distance(e1, e2, 1e-8);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-5));
  }
}

TEST_CASE("pwg distance on S-set matches the displayed double sum") {
  const double sigma = 1.0;
  const int p = 2, q = 7;
  const GaussianSumEmbedding ep =
      pwg_embedding(s_truncation(p).diagram, WeightFunction::persistence_squared, sigma);
  const GaussianSumEmbedding eq =
      pwg_embedding(s_truncation(q).diagram, WeightFunction::persistence_squared, sigma);
  const double dist = gaussian_sum_l2_distance(ep, eq);

  double expected_sq = 0.0;
  for (int k = p + 1; k <= q; ++k) {
    for (int l = p + 1; l <= q; ++l) {
      const PlanePoint pk = s_set_point(k), pl = s_set_point(l);
      const double dx = pk.birth - pl.birth, dy = pk.death - pl.death;
      expected_sq += (1.0 / (static_cast<double>(k) * k * l * l)) *
                     std::exp(-(dx * dx + dy * dy) / (4.0 * sigma * sigma));
    }
  }
  expected_sq *= M_PI * sigma * sigma;
  CHECK(dist * dist == doctest::Approx(expected_sq).epsilon(1e-9));
}

TEST_CASE("pwg tail norms on the S-set stay within the analytic bound") {
  // |Phi(Dg_q) - Phi(Dg_p)|^2 <= pi sigma^2 (sum_{k=p+1}^{q} 1/k^2)^2, here
  // checked on the embeddings themselves; the slack absorbs the difference
  // between coordinate-derived weights and exact 1/k^2.
  const double sigma = 1.0;
  std::vector<GaussianSumEmbedding> embeddings(101);
  for (int k = 1; k <= 100; ++k) {
    embeddings[static_cast<std::size_t>(k)] =
        pwg_embedding(s_truncation(k).diagram, WeightFunction::persistence_squared, sigma);
  }
  for (int p = 1; p < 100; p += 7) {
    for (int q = p + 1; q <= 100; q += 3) {
      const double dist = gaussian_sum_l2_distance(embeddings[static_cast<std::size_t>(p)],
                                                   embeddings[static_cast<std::size_t>(q)]);
      double partial = 0.0;
      for (int k = p + 1; k <= q; ++k) partial += 1.0 / (static_cast<double>(k) * k);
      const double bound = M_PI * sigma * sigma * (partial * partial);
      CHECK(dist * dist <= bound * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("pss embedding: mirror atoms and closed-form norm") {
  const PersistenceDiagram d = PersistenceDiagram::from_points({PlanePoint{0.0, 1.0}});
  for (const double sigma : {0.7, 1.0}) {
    const GaussianSumEmbedding e = pss_embedding(d, sigma);
    REQUIRE(e.atoms.size() == 2);
    CHECK(e.atoms[0].weight == 1.0);
    CHECK(e.atoms[1].center == PlanePoint{1.0, 0.0});
    CHECK(e.atoms[1].weight == -1.0);
    const double norm = gaussian_sum_l2_norm(e);
    const double expected_sq =
        M_PI * sigma * sigma * (2.0 - 2.0 * std::exp(-2.0 / (4.0 * sigma * sigma)));
    CHECK(norm * norm == doctest::Approx(expected_sq).epsilon(1e-12));
  }

  // A point hugging the diagonal cancels against its mirror.
  const PersistenceDiagram near_diag =
      PersistenceDiagram::from_points({PlanePoint{0.3, 0.3 + 1e-8}});
  CHECK(gaussian_sum_l2_norm(pss_embedding(near_diag, 1.0)) < 1e-7);

  CHECK(gaussian_sum_l2_distance(pss_embedding(d, 1.0), pss_embedding(d, 1.0)) == 0.0);
}

TEST_CASE("persistence image: empty, near-zero weight, single-pixel value") {
  const FiniteVector empty = persistence_image(PersistenceDiagram(), 10, 1.0,
                                               WeightFunction::persistence);
  REQUIRE(empty.entries.size() == 100);
  for (double v : empty.entries) CHECK(v == 0.0);

  // Persistence-weighted mass of a near-diagonal point is O(persistence).
  const PersistenceDiagram faint =
      PersistenceDiagram::from_points({PlanePoint{0.5, 0.5 + 1e-12}});
  const FiniteVector faint_img = persistence_image(faint, 5, 1.0, WeightFunction::persistence);
  for (double v : faint_img.entries) CHECK(std::abs(v) <= 1e-12);

  const PersistenceDiagram d = PersistenceDiagram::from_points({PlanePoint{0.0, 1.0}});
  const FiniteVector img = persistence_image(d, 1, 1.0, WeightFunction::persistence);
  REQUIRE(img.entries.size() == 1);
  CHECK(img.entries[0] == doctest::Approx(std::exp(-0.25) / (2.0 * M_PI)).epsilon(1e-15));

  // A point whose birth-persistence transform lands outside [0,1]^2 still
  // leaks Gaussian tail mass onto the grid.
  const PersistenceDiagram outside = PersistenceDiagram::from_points({PlanePoint{1.5, 3.0}});
  const FiniteVector tail_img = persistence_image(outside, 4, 1.0, WeightFunction::persistence);
  double mass = 0.0;
  for (double v : tail_img.entries) mass += v;
  CHECK(mass > 0.0);
}

TEST_CASE("topological vector: pairs, padding, truncation") {
  const PersistenceDiagram lone = PersistenceDiagram::from_points({PlanePoint{0.1, 0.8}});
  const FiniteVector v1 = topological_vector(lone, 3);
  CHECK(v1.entries == std::vector<double>{0.0, 0.0, 0.0});

  const PersistenceDiagram two =
      PersistenceDiagram::from_points({PlanePoint{0.0, 1.0}, PlanePoint{0.0, 2.0}});
  const FiniteVector v2 = topological_vector(two, 3);
  CHECK(v2.entries == std::vector<double>{0.5, 0.0, 0.0});

  const PersistenceDiagram five = sample_uniform_diagram(5, 11);
  const FiniteVector v3 = topological_vector(five, 2);
  REQUIRE(v3.entries.size() == 2);
  CHECK(v3.entries[0] >= v3.entries[1]);

  const FiniteVector same_a = topological_vector(five, 10);
  const FiniteVector same_b = topological_vector(five, 10);
  CHECK(same_a.entries == same_b.entries);
}

TEST_CASE("euclidean distance") {
  const FiniteVector a{{0.0, 0.0}, "v"};
  const FiniteVector b{{3.0, 4.0}, "v"};
  CHECK(euclidean_distance(a, b) == 5.0);
  CHECK(euclidean_distance(b, b) == 0.0);
  const FiniteVector e1{{1.0, 0.0, 0.0}, "v"};
  const FiniteVector e2{{0.0, 1.0, 0.0}, "v"};
  CHECK(euclidean_distance(e1, e2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const FiniteVector short_v{{1.0}, "v"};
  CHECK_THROWS_AS(euclidean_distance(a, short_v), std::invalid_argument);
}

TEST_CASE("all five maps are permutation invariant") {
  std::mt19937_64 rng(103);
  const PersistenceDiagram d = pdm_test::random_diagram(rng, 9);
  const PersistenceDiagram shuffled = shuffled_copy(d, rng);
  REQUIRE(d == shuffled);

  const LandscapeProfile l1 = landscape_profile(d, 3);
  const LandscapeProfile l2 = landscape_profile(shuffled, 3);
  CHECK(landscape_l2_distance(l1, l2) == 0.0);

  CHECK(gaussian_sum_l2_distance(pwg_embedding(d, WeightFunction::persistence_squared, 1.0),
                                 pwg_embedding(shuffled, WeightFunction::persistence_squared,
                                               1.0)) == 0.0);
  CHECK(gaussian_sum_l2_distance(pss_embedding(d, 1.0), pss_embedding(shuffled, 1.0)) == 0.0);
  CHECK(persistence_image(d, 10, 1.0, WeightFunction::persistence).entries ==
        persistence_image(shuffled, 10, 1.0, WeightFunction::persistence).entries);
  CHECK(topological_vector(d, 10).entries == topological_vector(shuffled, 10).entries);
}
