#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "semsub/errors.hpp"
#include "semsub/rng.hpp"
#include "semsub/svd.hpp"

using namespace semsub;

namespace {

double reconstruction_error(const Matrix& a, const ThinSvd& svd) {
  Matrix scaled = svd.u;
  for (std::size_t j = 0; j < scaled.cols(); ++j)
    for (std::size_t i = 0; i < scaled.rows(); ++i) scaled(i, j) *= svd.singular_values[j];
  const Matrix recon = matmul(scaled, svd.vt);
  return std::sqrt(frobenius_norm_sq(a - recon)) /
         std::max(1.0, std::sqrt(frobenius_norm_sq(a)));
}

double row_ortho_residual(const Matrix& vt) { return ortho_residual(transpose(vt)); }

void check_valid(const Matrix& a, const ThinSvd& svd) {
  CHECK(ortho_residual(svd.u) < 1e-9);
  CHECK(row_ortho_residual(svd.vt) < 1e-9);
  CHECK(reconstruction_error(a, svd) < 1e-8);
  for (std::size_t i = 1; i < svd.singular_values.size(); ++i)
    CHECK(svd.singular_values[i - 1] >= svd.singular_values[i]);
  for (double s : svd.singular_values) CHECK(s >= 0.0);
}

}  // namespace

TEST_CASE("thin_svd of a diagonal matrix") {
  Matrix a = Matrix::from_rows({{3, 0}, {0, 2}});
  ThinSvd svd = thin_svd(a);
  CHECK(svd.singular_values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(svd.singular_values[1] == doctest::Approx(2.0).epsilon(1e-12));
  // sign convention makes both factors the identity here
  CHECK(std::abs(svd.u(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(svd.u(1, 1) - 1.0) < 1e-12);
  CHECK(std::abs(svd.vt(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(svd.vt(1, 1) - 1.0) < 1e-12);
}

TEST_CASE("orthonormal input has unit singular values") {
  Rng rng(17);
  Matrix g = rng.gaussian(10, 4);
  // orthonormalize
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t c = 0; c < j; ++c) {
      double proj = 0.0;
      for (std::size_t i = 0; i < 10; ++i) proj += g(i, c) * g(i, j);
      for (std::size_t i = 0; i < 10; ++i) g(i, j) -= proj * g(i, c);
    }
    const double norm = column_norm(g, j);
    for (std::size_t i = 0; i < 10; ++i) g(i, j) /= norm;
  }
  ThinSvd svd = thin_svd(g);
  for (double s : svd.singular_values) CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("random 6x4: valid factors and Gram eigen oracle agreement") {
  Rng rng(23);
  Matrix a = rng.gaussian(6, 4);
  ThinSvd svd = thin_svd(a);
  check_valid(a, svd);
  CHECK(reconstruction_error(a, svd) < 1e-10);

  const Matrix gram = oracle::matmul(transpose(a), a);
  const std::vector<double> eig = oracle::symmetric_eigenvalues(gram);
  for (std::size_t i = 0; i < 4; ++i) {
    const double sq = svd.singular_values[i] * svd.singular_values[i];
    CHECK(std::abs(sq - eig[i]) / std::max(1.0, eig[i]) < 1e-8);
  }
}

TEST_CASE("wide matrices transpose correctly") {
  Rng rng(29);
  Matrix a = rng.gaussian(4, 9);
  ThinSvd svd = thin_svd(a);
  CHECK(svd.u.rows() == 4);
  CHECK(svd.u.cols() == 4);
  CHECK(svd.vt.rows() == 4);
  CHECK(svd.vt.cols() == 9);
  check_valid(a, svd);
}

TEST_CASE("round-trip and orthonormality at 512x64") {
  Rng rng(31);
  Matrix a = rng.gaussian(512, 64);
  ThinSvd svd = thin_svd(a);
  CHECK(ortho_residual(svd.u) < 1e-9);
  CHECK(row_ortho_residual(svd.vt) < 1e-9);
  CHECK(reconstruction_error(a, svd) < 1e-8);
}

TEST_CASE("rank-deficient input keeps full factor width") {
  Rng rng(37);
  Matrix base = rng.gaussian(8, 1);
  Matrix a(8, 3);
  for (std::size_t i = 0; i < 8; ++i) {
    a(i, 0) = base(i, 0);
    a(i, 1) = base(i, 0);       // duplicate column
    a(i, 2) = 2.0 * base(i, 0); // and a scaled copy
  }
  ThinSvd svd = thin_svd(a);
  CHECK(svd.u.cols() == 3);
  CHECK(ortho_residual(svd.u) < 1e-9);
  CHECK(svd.singular_values[1] < 1e-10 * svd.singular_values[0]);
  CHECK(reconstruction_error(a, svd) < 1e-8);
}

TEST_CASE("zero matrix decomposes with completed basis") {
  Matrix a(5, 2);
  ThinSvd svd = thin_svd(a);
  CHECK(svd.singular_values[0] == 0.0);
  CHECK(svd.singular_values[1] == 0.0);
  CHECK(ortho_residual(svd.u) < 1e-12);
}

TEST_CASE("thin_svd is deterministic and sign-fixed") {
  Rng rng(41);
  Matrix a = rng.gaussian(7, 3);
  ThinSvd first = thin_svd(a);
  ThinSvd second = thin_svd(a);
  for (std::size_t i = 0; i < first.u.size(); ++i) CHECK(first.u.data()[i] == second.u.data()[i]);
  for (std::size_t j = 0; j < 3; ++j) {
    double best = 0.0;
    double chosen = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
      if (std::abs(first.u(i, j)) > best) {
        best = std::abs(first.u(i, j));
        chosen = first.u(i, j);
      }
    }
    CHECK(chosen > 0.0);
  }
}

TEST_CASE("truncated_svd with k = min equals thin_svd") {
  Rng rng(43);
  Matrix a = rng.gaussian(6, 4);
  ThinSvd full = thin_svd(a);
  ThinSvd trunc = truncated_svd(a, 4);
  for (std::size_t i = 0; i < full.u.size(); ++i) CHECK(full.u.data()[i] == trunc.u.data()[i]);
  for (std::size_t i = 0; i < full.vt.size(); ++i) CHECK(full.vt.data()[i] == trunc.vt.data()[i]);
}

TEST_CASE("truncated_svd recovers a planted rank-1 factor") {
  Rng rng(47);
  Matrix u = rng.gaussian(9, 1);
  Matrix v = rng.gaussian(5, 1);
  Matrix a = matmul(u, transpose(v));
  ThinSvd svd = truncated_svd(a, 1);
  const double expected = column_norm(u, 0) * column_norm(v, 0);
  CHECK(svd.singular_values[0] == doctest::Approx(expected).epsilon(1e-10));
  // recovered direction matches u up to the sign fixed by the convention
  double cosine = 0.0;
  for (std::size_t i = 0; i < 9; ++i) cosine += svd.u(i, 0) * u(i, 0) / column_norm(u, 0);
  CHECK(std::abs(std::abs(cosine) - 1.0) < 1e-10);
}

TEST_CASE("truncated_svd satisfies Eckart-Young via the tail") {
  Rng rng(53);
  Matrix a = rng.gaussian(8, 6);
  ThinSvd full = thin_svd(a);
  for (std::size_t k : {1u, 3u, 5u}) {
    ThinSvd trunc = truncated_svd(a, k);
    Matrix scaled = trunc.u;
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < 8; ++i) scaled(i, j) *= trunc.singular_values[j];
    const double err_sq = frobenius_norm_sq(a - matmul(scaled, trunc.vt));
    double tail = 0.0;
    for (std::size_t i = k; i < full.singular_values.size(); ++i)
      tail += full.singular_values[i] * full.singular_values[i];
    CHECK(std::abs(std::sqrt(err_sq) - std::sqrt(tail)) < 1e-8);
  }
}

TEST_CASE("truncated_svd rejects out-of-range k") {
  Matrix a(4, 3);
  CHECK_THROWS_AS(truncated_svd(a, 0), DimensionError);
  CHECK_THROWS_AS(truncated_svd(a, 4), DimensionError);
}
