#include "semsub/solver.hpp"

#include <cmath>
#include <sstream>

#include "semsub/errors.hpp"
#include "semsub/rng.hpp"
#include "semsub/svd.hpp"

namespace semsub {

namespace {

constexpr double kUpdatePOrthoTol = 1.0e-6;
constexpr double kRidge = 1.0e-10;
// Detection threshold sits below the ridge so a regularized retry passes.
constexpr double kSingularPivot = 1.0e-12;

void require_shapes(const Matrix& z, const Matrix& s) {
  if (z.rows() != s.rows()) {
    std::ostringstream msg;
    msg << "solver: latent matrix is " << z.rows() << "x" << z.cols() << " but boundaries are "
        << s.rows() << "x" << s.cols();
    throw DimensionError(msg.str());
  }
}

double relative_drop(double prev, double next) {
  return std::abs(prev - next) / std::max(1.0, std::abs(prev));
}

// Cholesky solve of the SPD system m x = rhs for k x k m. Falls back to a
// ridge when a pivot collapses; reports whether the ridge was needed.
Matrix spd_solve(Matrix m, const Matrix& rhs, bool* used_ridge) {
  const std::size_t k = m.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));

  for (int attempt = 0; attempt < 2; ++attempt) {
    Matrix chol = m;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double sum = chol(i, j);
        for (std::size_t l = 0; l < j; ++l) sum -= chol(i, l) * chol(j, l);
        if (i == j) {
          if (sum <= kSingularPivot * std::max(1.0, max_diag)) {
            ok = false;
            break;
          }
          chol(i, i) = std::sqrt(sum);
        } else {
          chol(i, j) = sum / chol(j, j);
        }
      }
    }
    if (!ok) {
      for (std::size_t i = 0; i < k; ++i) m(i, i) += kRidge;
      if (used_ridge != nullptr) *used_ridge = true;
      continue;
    }
    // Forward/back substitution, one rhs column at a time.
    Matrix x(k, rhs.cols());
    for (std::size_t col = 0; col < rhs.cols(); ++col) {
      std::vector<double> y(k);
      for (std::size_t i = 0; i < k; ++i) {
        double sum = rhs(i, col);
        for (std::size_t l = 0; l < i; ++l) sum -= chol(i, l) * y[l];
        y[i] = sum / chol(i, i);
      }
      for (std::size_t ii = k; ii-- > 0;) {
        double sum = y[ii];
        for (std::size_t l = ii + 1; l < k; ++l) sum -= chol(l, ii) * x(l, col);
        x(ii, col) = sum / chol(ii, ii);
      }
    }
    return x;
  }
  throw DivergenceError("solver: normal equations stayed singular after ridge");
}

// Top-k left singular vectors of z and the matching singular values.
// Works on the smaller side: for wide data (n > m) the left vectors are the
// leading eigenvectors of the m x m Gram matrix z zᵀ, which avoids sweeping
// Jacobi rotations over length-n columns.
struct LeftFactors {
  Matrix u;                   // m x k
  std::vector<double> sigma;  // length k
};

LeftFactors top_left_factors(const Matrix& z, std::size_t k) {
  if (z.cols() <= z.rows()) {
    ThinSvd svd = truncated_svd(z, k);
    return LeftFactors{std::move(svd.u), std::move(svd.singular_values)};
  }
  const Matrix gram = matmul(z, transpose(z));
  ThinSvd eig = truncated_svd(gram, k);
  std::vector<double> sigma(k);
  for (std::size_t i = 0; i < k; ++i) sigma[i] = std::sqrt(std::max(0.0, eig.singular_values[i]));
  return LeftFactors{std::move(eig.u), std::move(sigma)};
}

}  // namespace

std::string to_string(InitMode mode) { return mode == InitMode::svd ? "svd" : "random"; }

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::full:
      return "full";
    case Variant::no_boundary:
      return "no_boundary";
    case Variant::no_nonneg:
      return "no_nonneg";
    case Variant::no_orthogonality:
      return "no_orthogonality";
    case Variant::baseline:
      return "baseline";
  }
  return "full";
}

InitMode init_mode_from_string(const std::string& s) {
  if (s == "svd") return InitMode::svd;
  if (s == "random") return InitMode::random;
  throw ConfigError("unknown init mode '" + s + "' (expected svd or random)");
}

Variant variant_from_string(const std::string& s) {
  if (s == "full") return Variant::full;
  if (s == "no_boundary") return Variant::no_boundary;
  if (s == "no_nonneg") return Variant::no_nonneg;
  if (s == "no_orthogonality") return Variant::no_orthogonality;
  if (s == "baseline") return Variant::baseline;
  throw ConfigError("unknown variant '" + s + "'");
}

SolverConfig SolverConfig::normalized() const {
  SolverConfig out = *this;
  if (out.variant == Variant::no_boundary) out.lambda = 0.0;
  if (out.variant == Variant::no_nonneg) out.alpha = 0.0;
  if (out.alpha < 0.0 || out.lambda < 0.0)
    throw ConfigError("solver: alpha and lambda must be non-negative");
  if ((out.variant == Variant::full || out.variant == Variant::no_boundary) && !(out.alpha > 0.0))
    throw ConfigError("solver: alpha must be positive for the " + to_string(out.variant) +
                      " variant");
  if (out.max_iters == 0) throw ConfigError("solver: max_iters must be positive");
  if (out.rel_tol < 0.0) throw ConfigError("solver: rel_tol must be non-negative");
  return out;
}

double evaluate_objective(const Matrix& z, const SolveState& state, const Matrix& s, double alpha,
                          double lambda) {
  require_shapes(z, s);
  if (state.w.rows() != z.rows() || state.w.cols() != s.cols() ||
      state.f.rows() != state.w.rows() || state.f.cols() != state.w.cols() ||
      state.p.rows() != state.w.cols() || state.p.cols() != z.cols()) {
    throw DimensionError("evaluate_objective: state shapes do not match inputs");
  }
  const double data_term = frobenius_norm_sq(z - matmul(state.w, state.p));
  const double aux_term = frobenius_norm_sq(state.w - state.f);
  const double boundary_term = frobenius_norm_sq(state.w - s);
  return data_term + alpha * aux_term - lambda * boundary_term;
}

Matrix solve_procrustes(const Matrix& a) {
  if (a.rows() < a.cols()) {
    std::ostringstream msg;
    msg << "solve_procrustes: no orthonormal " << a.cols() << "-frame exists in dimension "
        << a.rows();
    throw DimensionError(msg.str());
  }
  ThinSvd svd = thin_svd(a);
  return matmul(svd.u, svd.vt);
}

Matrix update_p(const Matrix& w, const Matrix& z) {
  if (w.rows() != z.rows()) {
    std::ostringstream msg;
    msg << "update_p: w is " << w.rows() << "x" << w.cols() << " but z is " << z.rows() << "x"
        << z.cols();
    throw DimensionError(msg.str());
  }
  const double residual = ortho_residual(w);
  if (residual >= kUpdatePOrthoTol) {
    std::ostringstream msg;
    msg << "update_p: w columns are not orthonormal (residual " << residual << ")";
    throw ValueError(msg.str());
  }
  return matmul(transpose(w), z);
}

Matrix project_nonneg(const Matrix& w) {
  Matrix out(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.size(); ++i) out.data()[i] = std::max(w.data()[i], 0.0);
  return out;
}

SolveState init_state(const Matrix& z, const Matrix& s, const SolverConfig& config) {
  require_shapes(z, s);
  const std::size_t k = s.cols();
  if (k > std::min(z.rows(), z.cols())) {
    std::ostringstream msg;
    msg << "init_state: k=" << k << " exceeds min(" << z.rows() << ", " << z.cols() << ")";
    throw DimensionError(msg.str());
  }
  Matrix w = [&] {
    if (config.init_mode == InitMode::svd) return top_left_factors(z, k).u;
    Rng rng(config.seed);
    return solve_procrustes(rng.gaussian(z.rows(), k));
  }();
  Matrix f = project_nonneg(w);
  Matrix p = update_p(w, z);
  return SolveState{std::move(w), std::move(p), std::move(f)};
}

SolveResult aidc_solve(const Matrix& z, const Matrix& s, const SolverConfig& raw_config) {
  const SolverConfig config = raw_config.normalized();
  if (config.variant == Variant::no_orthogonality || config.variant == Variant::baseline)
    throw ConfigError("aidc_solve: use solve_variant for the " + to_string(config.variant) +
                      " variant");
  const bool with_aux = config.variant != Variant::no_nonneg;

  SolveState state = init_state(z, s, config);
  const Matrix gram = matmul(z, transpose(z));
  const double z_sq = frobenius_norm_sq(z);

  // With p = wᵀ z and orthonormal w, ‖z − w p‖_F² = ‖z‖_F² − trace(wᵀ G w),
  // so the loop never touches z after the Gram precomputation.
  Matrix gw = matmul(gram, state.w);
  auto objective_of = [&](const Matrix& w, const Matrix& gw_local, const Matrix& f) {
    double j = z_sq - entrywise_dot(w, gw_local);
    if (with_aux) j += config.alpha * frobenius_norm_sq(w - f);
    if (config.lambda != 0.0) j -= config.lambda * frobenius_norm_sq(w - s);
    return j;
  };

  SolveTrace trace;
  bool converged = false;
  std::size_t iterations_run = 0;
  double objective = objective_of(state.w, gw, state.f);
  trace.records.push_back(
      {0, objective, ortho_residual(state.w), with_aux ? min_entry(state.f) : min_entry(state.w),
       0.0});

  Matrix target(state.w.rows(), state.w.cols());
  for (std::size_t t = 1; t <= config.max_iters; ++t) {
    // Procrustes target z pᵀ + alpha f − lambda s, with z pᵀ = G w.
    for (std::size_t i = 0; i < target.size(); ++i) {
      double v = gw.data()[i];
      if (with_aux) v += config.alpha * state.f.data()[i];
      if (config.lambda != 0.0) v -= config.lambda * s.data()[i];
      target.data()[i] = v;
    }
    state.w = solve_procrustes(target);
    if (with_aux) state.f = project_nonneg(state.w);
    gw = matmul(gram, state.w);

    const double next = objective_of(state.w, gw, state.f);
    if (!std::isfinite(next)) throw DivergenceError("aidc_solve: non-finite objective");
    const double drop = relative_drop(objective, next);
    trace.records.push_back(
        {t, next, ortho_residual(state.w), with_aux ? min_entry(state.f) : min_entry(state.w),
         drop});
    objective = next;
    iterations_run = t;
    if (drop < config.rel_tol) {
      converged = true;
      break;
    }
  }

  if (!with_aux) state.f = project_nonneg(state.w);
  state.p = update_p(state.w, z);
  return SolveResult{std::move(state), std::move(trace), converged, iterations_run};
}

SolveState solve_baseline(const Matrix& z, std::size_t k) {
  if (k < 1 || k > std::min(z.rows(), z.cols())) {
    std::ostringstream msg;
    msg << "solve_baseline: k=" << k << " out of range [1, " << std::min(z.rows(), z.cols())
        << "]";
    throw DimensionError(msg.str());
  }
  LeftFactors factors = top_left_factors(z, k);
  const double scale = std::sqrt(static_cast<double>(k));
  Matrix w = (1.0 / scale) * factors.u;
  // sqrt(k) Σ_k v_kᵀ written as sqrt(k) u_kᵀ z, since uᵀ z = Σ vᵀ.
  Matrix p = scale * matmul(transpose(factors.u), z);
  Matrix f = project_nonneg(w);
  return SolveState{std::move(w), std::move(p), std::move(f)};
}

namespace {

// Heuristic that drops the Stiefel constraint: each iteration replaces w by
// the column-normalized Procrustes target and fits p through the normal
// equations (wᵀw)⁻¹ wᵀ z, since wᵀw is no longer the identity.
SolveResult solve_without_orthogonality(const Matrix& z, const Matrix& s,
                                        const SolverConfig& config) {
  SolveState state = init_state(z, s, config);
  const Matrix gram = matmul(z, transpose(z));
  const double z_sq = frobenius_norm_sq(z);
  const std::size_t k = s.cols();

  SolveTrace trace;
  bool converged = false;
  std::size_t iterations_run = 0;
  Matrix gw = matmul(gram, state.w);

  // With p = (wᵀw)⁻¹ wᵀ z the data term reduces to
  // ‖z‖_F² − trace((wᵀw)⁻¹ wᵀ G w); z pᵀ likewise equals G w (wᵀw)⁻¹.
  auto fit = [&](const Matrix& w, const Matrix& gw_local, const Matrix& f) {
    Matrix wtw = matmul(transpose(w), w);
    Matrix wt_gw = matmul(transpose(w), gw_local);
    Matrix solved = spd_solve(wtw, wt_gw, &trace.ridge_warning);
    double trace_term = 0.0;
    for (std::size_t i = 0; i < k; ++i) trace_term += solved(i, i);
    double j = z_sq - trace_term + config.alpha * frobenius_norm_sq(w - f) -
               config.lambda * frobenius_norm_sq(w - s);
    return j;
  };

  double objective = fit(state.w, gw, state.f);
  trace.records.push_back({0, objective, ortho_residual(state.w), min_entry(state.f), 0.0});

  for (std::size_t t = 1; t <= config.max_iters; ++t) {
    Matrix wtw = matmul(transpose(state.w), state.w);
    Matrix zpt = transpose(spd_solve(wtw, transpose(gw), &trace.ridge_warning));
    Matrix target = zpt;
    for (std::size_t i = 0; i < target.size(); ++i)
      target.data()[i] += config.alpha * state.f.data()[i] - config.lambda * s.data()[i];

    for (std::size_t j = 0; j < k; ++j) {
      const double norm = column_norm(target, j);
      if (!(norm > 0.0) || !std::isfinite(norm))
        throw DivergenceError("solve_variant: zero or non-finite column in normalization step");
      for (std::size_t i = 0; i < target.rows(); ++i) target(i, j) /= norm;
    }
    state.w = target;
    state.f = project_nonneg(state.w);
    gw = matmul(gram, state.w);

    const double next = fit(state.w, gw, state.f);
    if (!std::isfinite(next)) throw DivergenceError("solve_variant: non-finite objective");
    const double drop = relative_drop(objective, next);
    trace.records.push_back({t, next, ortho_residual(state.w), min_entry(state.f), drop});
    objective = next;
    iterations_run = t;
    if (drop < config.rel_tol) {
      converged = true;
      break;
    }
  }

  Matrix wtw = matmul(transpose(state.w), state.w);
  state.p = spd_solve(wtw, matmul(transpose(state.w), z), &trace.ridge_warning);
  return SolveResult{std::move(state), std::move(trace), converged, iterations_run};
}

}  // namespace

SolveResult solve_variant(const Matrix& z, const Matrix& s, const SolverConfig& raw_config) {
  const SolverConfig config = raw_config.normalized();
  switch (config.variant) {
    case Variant::full:
    case Variant::no_boundary:
    case Variant::no_nonneg:
      return aidc_solve(z, s, config);
    case Variant::no_orthogonality:
      return solve_without_orthogonality(z, s, config);
    case Variant::baseline: {
      require_shapes(z, s);
      SolveState state = solve_baseline(z, s.cols());
      const double residual = frobenius_norm_sq(z - matmul(state.w, state.p));
      SolveTrace trace;
      trace.records.push_back({0, residual, ortho_residual(state.w), min_entry(state.f), 0.0});
      return SolveResult{std::move(state), std::move(trace), true, 0};
    }
  }
  throw ConfigError("solve_variant: unhandled variant");
}

}  // namespace semsub
