#include "semsub/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "semsub/errors.hpp"

namespace semsub {

namespace {

constexpr double kJacobiTol = 1.0e-14;
constexpr int kMaxSweeps = 100;

double column_dot(const Matrix& b, std::size_t p, std::size_t q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < b.rows(); ++i) sum += b(i, p) * b(i, q);
  return sum;
}

void rotate_columns(Matrix& m, std::size_t p, std::size_t q, double cs, double sn) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double vp = m(i, p);
    const double vq = m(i, q);
    m(i, p) = cs * vp - sn * vq;
    m(i, q) = sn * vp + cs * vq;
  }
}

// Fills u's null columns (zero singular value) with unit vectors orthogonal
// to all other columns, scanning canonical basis vectors in index order.
void complete_null_columns(Matrix& u, const std::vector<bool>& is_null) {
  const std::size_t m = u.rows();
  const std::size_t r = u.cols();
  for (std::size_t j = 0; j < r; ++j) {
    if (!is_null[j]) continue;
    bool placed = false;
    for (std::size_t e = 0; e < m && !placed; ++e) {
      std::vector<double> v(m, 0.0);
      v[e] = 1.0;
      // Two Gram-Schmidt passes against every already-valid column.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < r; ++c) {
          if (c == j || (is_null[c] && c > j)) continue;
          double proj = 0.0;
          for (std::size_t i = 0; i < m; ++i) proj += u(i, c) * v[i];
          for (std::size_t i = 0; i < m; ++i) v[i] -= proj * u(i, c);
        }
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0.5) {
        for (std::size_t i = 0; i < m; ++i) u(i, j) = v[i] / norm;
        placed = true;
      }
    }
    if (!placed) throw ConvergenceError("thin_svd: failed to complete orthonormal basis", 0.0);
  }
}

// Two-sided Jacobi eigenvectors of a symmetric c x c matrix, used to
// precondition the one-sided sweep below. Accuracy of the final factors is
// set by the one-sided pass, not by this warm start.
Matrix symmetric_eigenvectors(Matrix m) {
  const std::size_t c = m.rows();
  Matrix v = identity(c);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < c; ++p) {
      for (std::size_t q = p + 1; q < c; ++q) {
        const double denom = std::sqrt(std::abs(m(p, p) * m(q, q)));
        if (m(p, q) == 0.0 || std::abs(m(p, q)) <= kJacobiTol * denom) continue;
        const double tau = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        for (std::size_t i = 0; i < c; ++i) {
          const double mip = m(i, p);
          const double miq = m(i, q);
          m(i, p) = cs * mip - sn * miq;
          m(i, q) = sn * mip + cs * miq;
        }
        for (std::size_t i = 0; i < c; ++i) {
          const double mpi = m(p, i);
          const double mqi = m(q, i);
          m(p, i) = cs * mpi - sn * mqi;
          m(q, i) = sn * mpi + cs * mqi;
        }
        rotate_columns(v, p, q, cs, sn);
        rotated = true;
      }
    }
    if (!rotated) break;
  }
  return v;
}

// Gram matrix aᵀa computed column-against-column (no transpose copy).
Matrix column_gram(const Matrix& a) {
  const std::size_t c = a.cols();
  Matrix gram(c, c);
  for (std::size_t p = 0; p < c; ++p) {
    for (std::size_t q = p; q < c; ++q) {
      const double dot = column_dot(a, p, q);
      gram(p, q) = dot;
      gram(q, p) = dot;
    }
  }
  return gram;
}

// Tall (rows >= cols) one-sided Jacobi, warm-started from the Gram side:
// the eigenvectors of aᵀa nearly orthogonalize the columns up front, so the
// one-sided sweep (which alone determines the output accuracy) typically
// finishes in one or two passes instead of cold-start convergence.
ThinSvd thin_svd_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t c = a.cols();
  Matrix v = c > 1 ? symmetric_eigenvectors(column_gram(a)) : identity(c);
  Matrix b = matmul(a, v);

  // Squared column norms are cached across the sweep; a rotation only
  // touches columns p and q, whose norms are refreshed with the same dot
  // product the uncached code would use, so decisions stay bit-identical.
  std::vector<double> norm_sq(c);
  for (std::size_t j = 0; j < c; ++j) norm_sq[j] = column_dot(b, j, j);

  double off_residual = 0.0;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    off_residual = 0.0;
    for (std::size_t p = 0; p + 1 < c; ++p) {
      for (std::size_t q = p + 1; q < c; ++q) {
        const double app = norm_sq[p];
        const double aqq = norm_sq[q];
        const double apq = column_dot(b, p, q);
        const double denom = std::sqrt(app * aqq);
        if (denom == 0.0 || std::abs(apq) <= kJacobiTol * denom) continue;
        off_residual = std::max(off_residual, std::abs(apq) / denom);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        rotate_columns(b, p, q, cs, sn);
        rotate_columns(v, p, q, cs, sn);
        norm_sq[p] = column_dot(b, p, p);
        norm_sq[q] = column_dot(b, q, q);
        rotated = true;
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "thin_svd: Jacobi sweeps exhausted (residual " << off_residual << ")";
    throw ConvergenceError(msg.str(), off_residual);
  }

  std::vector<double> sigma(c);
  for (std::size_t j = 0; j < c; ++j) sigma[j] = column_norm(b, j);

  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Matrix u(m, c);
  Matrix vt(c, c);
  std::vector<double> sorted_sigma(c);
  std::vector<bool> is_null(c, false);
  for (std::size_t jj = 0; jj < c; ++jj) {
    const std::size_t src = order[jj];
    sorted_sigma[jj] = sigma[src];
    for (std::size_t i = 0; i < c; ++i) vt(jj, i) = v(i, src);
    if (sigma[src] > 0.0 && std::isfinite(1.0 / sigma[src])) {
      for (std::size_t i = 0; i < m; ++i) u(i, jj) = b(i, src) / sigma[src];
    } else {
      is_null[jj] = true;
    }
  }
  complete_null_columns(u, is_null);

  return ThinSvd{std::move(u), std::move(sorted_sigma), std::move(vt)};
}

// Sign convention: make the largest-magnitude entry of each u column
// positive, lowest row index winning ties. Applied to the final output
// orientation so results are reproducible for tall and wide inputs alike.
void apply_sign_convention(ThinSvd& s) {
  const std::size_t m = s.u.rows();
  const std::size_t r = s.u.cols();
  for (std::size_t j = 0; j < r; ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double mag = std::abs(s.u(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (s.u(arg, j) < 0.0) {
      for (std::size_t i = 0; i < m; ++i) s.u(i, j) = -s.u(i, j);
      for (std::size_t i = 0; i < s.vt.cols(); ++i) s.vt(j, i) = -s.vt(j, i);
    }
  }
}

}  // namespace

ThinSvd thin_svd(const Matrix& a) {
  ThinSvd out = [&] {
    if (a.rows() >= a.cols()) return thin_svd_tall(a);
    ThinSvd t = thin_svd_tall(transpose(a));
    return ThinSvd{transpose(t.vt), std::move(t.singular_values), transpose(t.u)};
  }();
  apply_sign_convention(out);
  return out;
}

ThinSvd truncated_svd(const Matrix& a, std::size_t k) {
  const std::size_t r = std::min(a.rows(), a.cols());
  if (k < 1 || k > r) {
    std::ostringstream msg;
    msg << "truncated_svd: k=" << k << " out of range [1, " << r << "]";
    throw DimensionError(msg.str());
  }
  ThinSvd full = thin_svd(a);
  if (k == r) return full;
  Matrix u(a.rows(), k);
  Matrix vt(k, a.cols());
  std::vector<double> sigma(full.singular_values.begin(), full.singular_values.begin() + k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) u(i, j) = full.u(i, j);
    for (std::size_t i = 0; i < a.cols(); ++i) vt(j, i) = full.vt(j, i);
  }
  return ThinSvd{std::move(u), std::move(sigma), std::move(vt)};
}

}  // namespace semsub
