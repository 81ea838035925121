#include <cmath>

#include "doctest.h"
#include "semsub/errors.hpp"
#include "semsub/metrics.hpp"
#include "semsub/rng.hpp"
#include "semsub/solver.hpp"
#include "semsub/svd.hpp"
#include "semsub/synth.hpp"

using namespace semsub;

namespace {

// Largest principal angle (radians) between the column spans of two
// orthonormal frames, from the singular values of qaᵀ qb.
double max_principal_angle(const Matrix& qa, const Matrix& qb) {
  Matrix overlap = matmul(transpose(qa), qb);
  ThinSvd svd = thin_svd(overlap);
  double smallest = 1.0;
  for (double s : svd.singular_values) smallest = std::min(smallest, s);
  smallest = std::min(1.0, std::max(-1.0, smallest));
  return std::acos(smallest);
}

}  // namespace

TEST_CASE("planted model invariants") {
  PlantedModel model = make_planted_model(20, 4, 0.5, 0.1, 11);
  CHECK(ortho_residual(model.w_true) < 1e-9);
  // directions lean non-negative: most of the squared mass sits above zero
  double pos_mass = 0.0;
  for (double v : model.w_true.data())
    if (v > 0.0) pos_mass += v * v;
  CHECK(pos_mass / frobenius_norm_sq(model.w_true) > 0.6);
  Matrix exact = make_planted_model(20, 4, 0.5, 0.1, 11, 0.05, 0.05, 0.0).w_true;
  CHECK(min_entry(exact) >= 0.0);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(std::abs(column_norm(model.s_true.s, j) - 1.0) < 1e-10);
  CHECK_THROWS_AS(make_planted_model(20, 4, 1.2, 0.1, 11), ValueError);
  CHECK_THROWS_AS(make_planted_model(3, 5, 0.0, 0.1, 11), DimensionError);
}

TEST_CASE("generate is deterministic per seed") {
  PlantedModel model = make_planted_model(16, 3, 0.3, 0.05, 42);
  SynthData a = generate(model, 16, 3, 50);
  SynthData b = generate(model, 16, 3, 50);
  for (std::size_t i = 0; i < a.z.size(); ++i) CHECK(a.z.data()[i] == b.z.data()[i]);

  PlantedModel other = make_planted_model(16, 3, 0.3, 0.05, 43);
  SynthData c = generate(other, 16, 3, 50);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.z.size(); ++i)
    if (a.z.data()[i] != c.z.data()[i]) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("noiseless uncorrelated instance: baseline recovers the planted span") {
  PlantedModel model = make_planted_model(24, 3, 0.0, 0.0, 7);
  SynthData data = generate(model, 24, 3, 600);
  SolveState state = solve_baseline(data.z, 3);
  // rescale baseline w (norm 1/sqrt(k) columns) to an orthonormal frame
  Matrix frame = std::sqrt(3.0) * state.w;
  CHECK(max_principal_angle(frame, model.w_true) < 1e-6);
}

TEST_CASE("planted score correlation tracks the analytic mix Gram") {
  const double rho = 0.5;
  const std::size_t k = 4;
  // boundary_noise 0 makes the scorers exactly the planted directions, so
  // scores are the mixed codes themselves up to noise.
  PlantedModel model = make_planted_model(32, k, rho, 0.0, 13, 0.0);
  SynthData data = generate(model, 32, k, 10000);

  // empirical correlation of attribute scores across samples
  std::vector<std::vector<double>> scores(k, std::vector<double>(data.z.cols()));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t j = 0; j < data.z.cols(); ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 32; ++i) dot += data.scorers[a].weights[i] * data.z(i, j);
      scores[a][j] = dot;
    }

  // analytic correlation from the mix Gram rows
  Matrix gram = matmul(model.mix, transpose(model.mix));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double analytic = std::abs(gram(a, b)) / std::sqrt(gram(a, a) * gram(b, b));
      const double empirical = pearson_abs(scores[a], scores[b]);
      CHECK(std::abs(empirical - analytic) < 0.1);
    }
  }
}

TEST_CASE("score_deltas literal cases") {
  Rng rng(3);
  const std::size_t m = 10;
  Matrix z = rng.gaussian(m, 6);

  // one direction orthogonal to both scorers, one parallel to scorer 0
  Matrix w(m, 2);
  w(0, 0) = 1.0;
  w(1, 1) = 1.0;
  std::vector<LinearScorer> scorers;
  std::vector<double> c0(m, 0.0);
  c0[0] = 1.0;
  std::vector<double> c1(m, 0.0);
  c1[2] = 1.0;  // responds to neither direction... only to axis 2
  scorers.push_back(LinearScorer{"on", c0, 0.0});
  scorers.push_back(LinearScorer{"off", c1, 0.0});

  std::vector<DeltaSet> sets = score_deltas(z, w, scorers, 1.0);
  REQUIRE(sets.size() == 2);
  // direction 0 is parallel to scorer "on": delta is exactly -1 everywhere
  for (double v : sets[0].deltas[0]) CHECK(v == -1.0);
  // scorer "off" is orthogonal to both directions: exact zeros
  for (double v : sets[0].deltas[1]) CHECK(v == 0.0);
  for (double v : sets[1].deltas[1]) CHECK(v == 0.0);

  // doubling beta doubles every delta exactly
  std::vector<DeltaSet> doubled = score_deltas(z, w, scorers, 2.0);
  for (std::size_t d = 0; d < 2; ++d)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t j = 0; j < 6; ++j)
        CHECK(doubled[d].deltas[a][j] == 2.0 * sets[d].deltas[a][j]);

  // the all-zero sequences are rejected by the correlation metric
  CHECK_THROWS_AS(correlation_matrix(sets[1]), ValueError);
  CHECK_THROWS_AS(score_deltas(z, w, scorers, 0.0), ValueError);
}

TEST_CASE("sampled_edit_deltas: seeded, beta-exact, and disentanglement-sensitive") {
  PlantedModel model = make_planted_model(24, 3, 0.0, 0.0, 21, 0.0);
  SynthData data = generate(model, 24, 3, 2000);

  DeltaSet once = sampled_edit_deltas(data.z, model.w_true, data.scorers, 0.3, 1e-3, 5);
  DeltaSet again = sampled_edit_deltas(data.z, model.w_true, data.scorers, 0.3, 1e-3, 5);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t j = 0; j < 2000; ++j) CHECK(once.deltas[a][j] == again.deltas[a][j]);

  // negating beta flips every delta exactly, so correlations are unchanged
  DeltaSet flipped = sampled_edit_deltas(data.z, model.w_true, data.scorers, -0.3, 1e-3, 5);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t j = 0; j < 2000; ++j) CHECK(flipped.deltas[a][j] == -once.deltas[a][j]);
  CHECK(correlation_matrix(once).overall_avg ==
        doctest::Approx(correlation_matrix(flipped).overall_avg).epsilon(1e-12));

  // doubling beta doubles deltas exactly under the same seed
  DeltaSet doubled = sampled_edit_deltas(data.z, model.w_true, data.scorers, 0.6, 1e-3, 5);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t j = 0; j < 2000; ++j)
      CHECK(doubled.deltas[a][j] == 2.0 * once.deltas[a][j]);

  // ground-truth directions are disentangled: low average correlation
  CHECK(correlation_matrix(once).overall_avg < 0.05);

  // a deliberately mixed frame couples the attribute responses
  Matrix mixed(24, 3);
  const double inv = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 24; ++i) {
    mixed(i, 0) = inv * (model.w_true(i, 0) + model.w_true(i, 1));
    mixed(i, 1) = inv * (model.w_true(i, 1) + model.w_true(i, 2));
    mixed(i, 2) = inv * (model.w_true(i, 2) + model.w_true(i, 0));
  }
  DeltaSet tangled = sampled_edit_deltas(data.z, mixed, data.scorers, 0.3, 1e-3, 5);
  CHECK(correlation_matrix(tangled).overall_avg > 0.2);
}

TEST_CASE("haar_frame produces orthonormal frames") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix q = haar_frame(9, 4, rng);
    CHECK(ortho_residual(q) < 1e-12);
  }
  CHECK_THROWS_AS(haar_frame(3, 5, rng), DimensionError);
}

TEST_CASE("brute_force_procrustes is reproducible and bounded by the solver") {
  Rng rng(33);
  Matrix a = rng.gaussian(6, 3);
  ProcrustesSearch s1 = brute_force_procrustes(a, 1, 17);
  ProcrustesSearch s2 = brute_force_procrustes(a, 1, 17);
  for (std::size_t i = 0; i < s1.best_frame.size(); ++i)
    CHECK(s1.best_frame.data()[i] == s2.best_frame.data()[i]);

  Matrix w = solve_procrustes(a);
  const double optimal = entrywise_dot(a, w);
  ProcrustesSearch search = brute_force_procrustes(a, 5000, 17);
  CHECK(search.best_value <= optimal + 1e-9);
}

TEST_CASE("brute_force_procrustes approaches the analytic k=1 optimum") {
  Matrix a = Matrix::from_rows({{3.0}, {4.0}});  // optimum is ‖a‖ = 5 at q = a/‖a‖
  ProcrustesSearch search = brute_force_procrustes(a, 1000000, 3);
  CHECK(std::abs(search.best_value - 5.0) < 1e-3);
}
