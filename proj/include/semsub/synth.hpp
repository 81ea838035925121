#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semsub/boundary.hpp"
#include "semsub/matrix.hpp"
#include "semsub/metrics.hpp"
#include "semsub/rng.hpp"

namespace semsub {

// One attribute's linear scoring rule: score(z) = weights · z + bias.
// Weights are unit norm.
struct LinearScorer {
  std::string attribute;
  std::vector<double> weights;
  double bias = 0.0;
};

// Ground-truth generating process for synthetic benchmarks. w_true holds
// orthonormal non-negative direction columns with disjoint supports;
// s_true columns are unit-normalized noisy copies of them; mix couples the
// attribute codes (off-diagonal magnitude rho controls planted
// entanglement) and carries the overall code scale on its diagonal.
struct PlantedModel {
  Matrix w_true;
  BoundaryMatrix s_true;
  Matrix mix;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

// Builds a model with m-dimensional latents and k attributes. rho must lie
// in [0, 0.9]. boundary_noise perturbs s_true away from w_true before
// normalization; code_scale sets the magnitude of the planted signal
// relative to the solver's O(1) regularization terms; neg_fraction is the
// expected share of sign-flipped entries in w_true (how far the truth
// leans off the non-negative orthant).
PlantedModel make_planted_model(std::size_t m, std::size_t k, double rho, double noise_sigma,
                                std::uint64_t seed, double boundary_noise = 0.05,
                                double code_scale = 0.05, double neg_fraction = 0.2);

struct SynthData {
  Matrix z;                           // m x n latent samples
  BoundaryMatrix s;                   // copy of the model's boundaries
  std::vector<LinearScorer> scorers;  // one per attribute, weights = s columns
};

// Samples z = w_true (mix c) + eps with a seeded k x n standard-normal code
// matrix c and entrywise N(0, noise_sigma²) eps. Pure function of
// (model, dims): the same model and dims always give identical bytes.
SynthData generate(const PlantedModel& model, std::size_t m, std::size_t k, std::size_t n);

// Score differences for editing each direction in turn with a fixed
// magnitude: editing column i of w shifts attribute a's score by exactly
// beta * (c_a · w_i) on every sample, so each returned DeltaSet (one per
// edited direction) holds constant sequences. Kept exact — linearity means
// the z terms cancel — so orthogonal scorer/direction pairs give literal
// zeros and doubling beta doubles every delta bit-for-bit.
std::vector<DeltaSet> score_deltas(const Matrix& z, const Matrix& w,
                                   const std::vector<LinearScorer>& scorers, double beta);

// Disentanglement probe built on the same linear scorers: every sample is
// edited by all k directions at once with seeded per-sample Gaussian
// magnitudes whose standard deviations differ per direction (editing ranges
// differ per attribute in practice). Attribute a's delta sequence is
// -beta * (sum_i v_i g_i (c_a · w_i) + nu), and its cross-attribute Pearson
// correlation estimates how much the directions' effects overlap: exactly
// zero off-diagonal when each direction drives a single scorer, nonzero for
// any rotation that mixes them. effect_noise (nu, per sample and attribute)
// keeps sequences non-constant when a direction misses every scorer; the
// whole delta scales linearly with beta, so negating or doubling beta
// transforms the output exactly.
DeltaSet sampled_edit_deltas(const Matrix& z, const Matrix& w,
                             const std::vector<LinearScorer>& scorers, double beta,
                             double effect_noise, std::uint64_t seed);

// Haar-distributed orthonormal frame via QR of a Gaussian draw with the
// R-diagonal sign correction.
Matrix haar_frame(std::size_t rows, std::size_t cols, Rng& rng);

struct ProcrustesSearch {
  Matrix best_frame;
  double best_value;  // trace(aᵀ q) of the best sampled frame
};

// Lower-bound oracle for the Procrustes solution: the best trace(aᵀ q) over
// `trials` Haar-random frames q.
ProcrustesSearch brute_force_procrustes(const Matrix& a, std::size_t trials, std::uint64_t seed);

}  // namespace semsub
