#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semsub/matrix.hpp"

namespace semsub {

enum class InitMode { svd, random };

enum class Variant { full, no_boundary, no_nonneg, no_orthogonality, baseline };

std::string to_string(InitMode mode);
std::string to_string(Variant variant);
InitMode init_mode_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);

struct SolverConfig {
  double alpha = 0.5;
  double lambda = 1.0;
  std::size_t max_iters = 30;
  double rel_tol = 1.0e-6;
  InitMode init_mode = InitMode::svd;
  std::uint64_t seed = 0;
  Variant variant = Variant::full;

  // Applies the per-variant coupling rules (no_boundary forces lambda = 0,
  // no_nonneg forces alpha = 0) and validates the result. The alternation
  // requires alpha > 0 for the full and no_boundary variants.
  SolverConfig normalized() const;
};

struct SolveState {
  Matrix w;  // m x k semantic basis
  Matrix p;  // k x n coefficients
  Matrix f;  // m x k non-negative auxiliary
};

struct TraceRecord {
  std::size_t iteration;
  double objective;
  double ortho_residual;
  double min_f;
  double rel_drop;
};

struct SolveTrace {
  std::vector<TraceRecord> records;
  // Set when the no_orthogonality variant had to regularize a singular
  // normal-equations system with a 1e-10 ridge.
  bool ridge_warning = false;
};

struct SolveResult {
  SolveState state;
  SolveTrace trace;
  bool converged = false;
  std::size_t iterations_run = 0;
};

// J(w, p, f) = ‖z − w p‖_F² + alpha ‖w − f‖_F² − lambda ‖w − s‖_F².
// May be negative; deterministic entrywise evaluation.
double evaluate_objective(const Matrix& z, const SolveState& state, const Matrix& s, double alpha,
                          double lambda);

// Nearest matrix with orthonormal columns: argmin ‖w − a‖_F over the
// Stiefel manifold, equivalently argmax trace(aᵀ w). Solved as u vᵀ from
// the thin SVD of a. Requires rows >= cols.
Matrix solve_procrustes(const Matrix& a);

// Optimal coefficients given an orthonormal w: p = wᵀ z. Rejects w whose
// orthonormality residual exceeds 1e-6 (the closed form is invalid then).
Matrix update_p(const Matrix& w, const Matrix& z);

// Entrywise max(w, 0): the Euclidean projection onto the non-negative
// orthant, equal to (w + |w|) / 2.
Matrix project_nonneg(const Matrix& w);

// First iterate: svd mode takes the top-k left singular vectors of z,
// random mode the Procrustes factor of a seeded Gaussian draw; then
// f = project_nonneg(w) and p = update_p(w, z). k is s.cols().
SolveState init_state(const Matrix& z, const Matrix& s, const SolverConfig& config);

// Alternating loop: w via Procrustes on (z pᵀ + alpha f − lambda s), then
// p = wᵀ z, then f = max(w, 0). Stops at max_iters or when the relative
// objective drop |J_t − J_{t+1}| / max(1, |J_t|) falls below rel_tol.
//
// The loop keeps p implicit through the precomputed Gram matrix z zᵀ
// (z pᵀ = (z zᵀ) w whenever p = wᵀ z), so per-iteration cost is
// O(m²k) regardless of the sample count n; p is materialized once at the
// end. Handles the full, no_boundary and no_nonneg variants.
SolveResult aidc_solve(const Matrix& z, const Matrix& s, const SolverConfig& config);

// Unconstrained subspace baseline via truncated SVD: w = u_k / sqrt(k)
// (so ‖w‖_F = 1), p = sqrt(k) Σ_k v_kᵀ, f = project_nonneg(w). Attains the
// global minimum of ‖z − w p‖_F² at the given width.
SolveState solve_baseline(const Matrix& z, std::size_t k);

// Dispatches on config.variant: full/no_boundary/no_nonneg run the
// alternating loop (with forced parameters), no_orthogonality runs the
// column-normalized heuristic with normal-equation coefficients, baseline
// wraps solve_baseline.
SolveResult solve_variant(const Matrix& z, const Matrix& s, const SolverConfig& config);

}  // namespace semsub
