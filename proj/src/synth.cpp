#include "semsub/synth.hpp"

#include <cmath>
#include <sstream>

#include "semsub/errors.hpp"

namespace semsub {

namespace {

constexpr std::uint64_t kStreamModel = 1;
constexpr std::uint64_t kStreamData = 2;
constexpr std::uint64_t kStreamDeltas = 3;

void require_scorer_shapes(const Matrix& z, const Matrix& w,
                           const std::vector<LinearScorer>& scorers) {
  if (w.rows() != z.rows()) {
    std::ostringstream msg;
    msg << "score deltas: directions are " << w.rows() << "x" << w.cols() << " but latents are "
        << z.rows() << "x" << z.cols();
    throw DimensionError(msg.str());
  }
  if (scorers.empty()) throw DimensionError("score deltas: no scorers");
  for (const auto& scorer : scorers) {
    if (scorer.weights.size() != z.rows())
      throw DimensionError("score deltas: scorer '" + scorer.attribute +
                           "' weight length does not match latent dimension");
  }
}

// Cross-effect matrix: entry (a, i) is scorer a's response to a unit step
// along direction i.
Matrix cross_effects(const Matrix& w, const std::vector<LinearScorer>& scorers) {
  Matrix m(scorers.size(), w.cols());
  for (std::size_t a = 0; a < scorers.size(); ++a) {
    for (std::size_t i = 0; i < w.cols(); ++i) {
      double dot = 0.0;
      for (std::size_t r = 0; r < w.rows(); ++r) dot += scorers[a].weights[r] * w(r, i);
      m(a, i) = dot;
    }
  }
  return m;
}

}  // namespace

PlantedModel make_planted_model(std::size_t m, std::size_t k, double rho, double noise_sigma,
                                std::uint64_t seed, double boundary_noise, double code_scale,
                                double neg_fraction) {
  if (k < 1 || k > m) throw DimensionError("make_planted_model: need 1 <= k <= m");
  if (rho < 0.0 || rho > 0.9) throw ValueError("make_planted_model: rho must lie in [0, 0.9]");
  if (noise_sigma < 0.0 || boundary_noise < 0.0 || code_scale <= 0.0)
    throw ValueError("make_planted_model: negative noise or non-positive scale");
  if (neg_fraction < 0.0 || neg_fraction > 0.5)
    throw ValueError("make_planted_model: neg_fraction must lie in [0, 0.5]");

  Rng rng(derive_seed(seed, kStreamModel));

  // Disjoint supports make the columns exactly orthogonal. Entries are
  // half-normal with a seeded minority flipped negative: the directions
  // lean non-negative without sitting exactly on the orthant, so the
  // non-negativity coupling and the boundary term carry complementary
  // (rather than redundant) information about the planted frame.
  Matrix w_true(m, k);
  const std::size_t base = m / k;
  const std::size_t extra = m % k;
  std::size_t row = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t len = base + (j < extra ? 1 : 0);
    if (len == 0) throw DimensionError("make_planted_model: more attributes than dimensions");
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      double v = std::abs(rng.normal());
      if (rng.uniform() < neg_fraction) v = -v;
      w_true(row + i, j) = v;
      norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    for (std::size_t i = 0; i < len; ++i) w_true(row + i, j) /= norm;
    row += len;
  }

  // Boundaries are unit-normalized noisy copies of the planted directions,
  // oriented so that repelling from s_i pushes w_i toward +w_true_i. The
  // orientation matters: with the opposite sign the solution is driven into
  // the negative orthant, where max(w, 0) = 0 and the non-negativity
  // coupling degenerates to a constant on the Stiefel manifold.
  Matrix raw_s(m, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m; ++i)
      raw_s(i, j) = -w_true(i, j) + boundary_noise * rng.normal();
  std::vector<std::string> labels;
  labels.reserve(k);
  for (std::size_t j = 0; j < k; ++j) labels.push_back("attr" + std::to_string(j));
  BoundaryMatrix s_true = normalize_boundaries(raw_s, std::move(labels));

  // Row scales descend so the planted code covariance has distinct
  // eigenvalues: the maximum-variance frame is then unique and entangled
  // whenever rho > 0, which is what the solvers must fight against.
  Matrix mix(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const double tau = k == 1 ? 1.0 : 1.0 - 0.4 * static_cast<double>(i) / static_cast<double>(k - 1);
    for (std::size_t j = 0; j < k; ++j)
      mix(i, j) = code_scale * tau * (i == j ? 1.0 : rho);
  }

  return PlantedModel{std::move(w_true), std::move(s_true), std::move(mix), noise_sigma, seed};
}

SynthData generate(const PlantedModel& model, std::size_t m, std::size_t k, std::size_t n) {
  if (model.w_true.rows() != m || model.w_true.cols() != k)
    throw DimensionError("generate: dims do not match the model");
  if (n < 2) throw DimensionError("generate: need n >= 2 samples");

  Rng rng(derive_seed(model.seed, kStreamData));
  Matrix code = matmul(model.mix, rng.gaussian(k, n));
  Matrix z = matmul(model.w_true, code);
  if (model.noise_sigma > 0.0) {
    for (double& v : z.data()) v += model.noise_sigma * rng.normal();
  }

  std::vector<LinearScorer> scorers;
  scorers.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    scorers.push_back(LinearScorer{model.s_true.labels[j], model.s_true.s.column(j), 0.0});

  return SynthData{std::move(z), model.s_true, std::move(scorers)};
}

std::vector<DeltaSet> score_deltas(const Matrix& z, const Matrix& w,
                                   const std::vector<LinearScorer>& scorers, double beta) {
  require_scorer_shapes(z, w, scorers);
  if (beta == 0.0) throw ValueError("score_deltas: beta must be non-zero");
  const Matrix effects = cross_effects(w, scorers);
  const std::size_t n = z.cols();

  std::vector<DeltaSet> out;
  out.reserve(w.cols());
  for (std::size_t i = 0; i < w.cols(); ++i) {
    DeltaSet set;
    for (std::size_t a = 0; a < scorers.size(); ++a) {
      set.attributes.push_back(scorers[a].attribute);
      // score(z) − score(z + beta w_i) = −beta (c_a · w_i) for every sample.
      set.deltas.emplace_back(n, -beta * effects(a, i));
    }
    out.push_back(std::move(set));
  }
  return out;
}

DeltaSet sampled_edit_deltas(const Matrix& z, const Matrix& w,
                             const std::vector<LinearScorer>& scorers, double beta,
                             double effect_noise, std::uint64_t seed) {
  require_scorer_shapes(z, w, scorers);
  if (beta == 0.0) throw ValueError("sampled_edit_deltas: beta must be non-zero");
  if (effect_noise < 0.0) throw ValueError("sampled_edit_deltas: negative effect noise");
  const Matrix effects = cross_effects(w, scorers);
  const std::size_t n = z.cols();
  const std::size_t k_dirs = w.cols();
  const std::size_t k_attrs = scorers.size();

  Rng rng(derive_seed(seed, kStreamDeltas));
  DeltaSet set;
  set.attributes.reserve(k_attrs);
  for (const auto& scorer : scorers) set.attributes.push_back(scorer.attribute);
  set.deltas.assign(k_attrs, std::vector<double>(n, 0.0));

  // Per-direction magnitude scales are deliberately unequal (editing ranges
  // differ per attribute in practice). With equal scales the delta
  // covariance would be proportional to effectsᵀ·effects and thus depend on
  // w only through its column span; distinct scales make it
  // effects·diag(v)·effectsᵀ, whose off-diagonal vanishes exactly when each
  // direction hits a single scorer, so rotations inside the span remain
  // visible to the metric.
  std::vector<double> dir_scale(k_dirs);
  for (std::size_t i = 0; i < k_dirs; ++i)
    dir_scale[i] =
        k_dirs == 1 ? 1.0 : 1.0 + static_cast<double>(i) / static_cast<double>(k_dirs - 1);

  std::vector<double> magnitudes(k_dirs);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k_dirs; ++i) magnitudes[i] = dir_scale[i] * rng.normal();
    for (std::size_t a = 0; a < k_attrs; ++a) {
      double response = 0.0;
      for (std::size_t i = 0; i < k_dirs; ++i) response += magnitudes[i] * effects(a, i);
      if (effect_noise > 0.0) response += effect_noise * rng.normal();
      set.deltas[a][j] = -beta * response;
    }
  }
  return set;
}

Matrix haar_frame(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw DimensionError("haar_frame: cols must not exceed rows");
  Matrix g = rng.gaussian(rows, cols);
  Matrix q(rows, cols);
  // Modified Gram-Schmidt with a second pass; the R diagonal sign fix keeps
  // the distribution exactly Haar.
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> v = g.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < j; ++c) {
        double proj = 0.0;
        for (std::size_t i = 0; i < rows; ++i) proj += q(i, c) * v[i];
        for (std::size_t i = 0; i < rows; ++i) v[i] -= proj * q(i, c);
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw ValueError("haar_frame: degenerate Gaussian draw");
    // Gram-Schmidt makes diag(R) = ‖v‖ > 0 by construction, which is the
    // sign-corrected convention that keeps the frame exactly Haar.
    for (std::size_t i = 0; i < rows; ++i) q(i, j) = v[i] / norm;
  }
  return q;
}

ProcrustesSearch brute_force_procrustes(const Matrix& a, std::size_t trials, std::uint64_t seed) {
  if (a.rows() < a.cols()) throw DimensionError("brute_force_procrustes: need rows >= cols");
  if (trials < 1) throw ValueError("brute_force_procrustes: need at least one trial");
  Rng rng(seed);
  ProcrustesSearch best{Matrix(a.rows(), a.cols()), 0.0};
  bool first = true;
  for (std::size_t t = 0; t < trials; ++t) {
    Matrix q = haar_frame(a.rows(), a.cols(), rng);
    const double value = entrywise_dot(a, q);
    if (first || value > best.best_value) {
      best.best_frame = std::move(q);
      best.best_value = value;
      first = false;
    }
  }
  return best;
}

}  // namespace semsub
