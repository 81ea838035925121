#include <cmath>

#include "doctest.h"
#include "semsub/boundary.hpp"
#include "semsub/errors.hpp"
#include "semsub/rng.hpp"
#include "semsub/synth.hpp"

using namespace semsub;

namespace {

std::vector<double> unit_vector(Rng& rng, std::size_t m) {
  std::vector<double> v(m);
  double norm = 0.0;
  for (double& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

TEST_CASE("normalize_boundaries leaves unit columns in place") {
  Rng rng(1);
  Matrix raw = haar_frame(9, 3, rng);
  BoundaryMatrix bm = normalize_boundaries(raw, {"a", "b", "c"});
  for (std::size_t i = 0; i < raw.size(); ++i)
    CHECK(std::abs(bm.s.data()[i] - raw.data()[i]) < 1e-12);
}

TEST_CASE("normalize_boundaries scales a 3-4 column") {
  Matrix raw(4, 1);
  raw(0, 0) = 3.0;
  raw(1, 0) = 4.0;
  BoundaryMatrix bm = normalize_boundaries(raw, {"attr"});
  CHECK(bm.s(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(bm.s(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(bm.s(2, 0) == 0.0);
}

TEST_CASE("normalize_boundaries yields unit norms on random input") {
  Rng rng(2);
  Matrix raw = rng.gaussian(12, 5);
  BoundaryMatrix bm = normalize_boundaries(raw, {"p", "q", "r", "s", "t"});
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(std::abs(column_norm(bm.s, j) - 1.0) < 1e-10);
}

TEST_CASE("normalize_boundaries names the zero attribute") {
  Matrix raw(4, 2);
  raw(0, 0) = 1.0;  // second column stays zero
  CHECK_THROWS_WITH_AS(normalize_boundaries(raw, {"ok", "broken"}),
                       doctest::Contains("broken"), ValueError);
}

TEST_CASE("boundary_distance identities") {
  Rng rng(3);
  Matrix w = haar_frame(10, 4, rng);
  BoundaryMatrix bm = normalize_boundaries(w, {"a", "b", "c", "d"});
  BoundaryDistance same = boundary_distance(bm.s, bm);
  for (double d : same.per_attribute) CHECK(d == 0.0);
  CHECK(same.total == 0.0);

  // orthogonal unit pair: squared distance 2 − 2⟨w, s⟩ = 2
  Matrix w2(4, 1);
  w2(0, 0) = 1.0;
  Matrix s2(4, 1);
  s2(1, 0) = 1.0;
  BoundaryDistance ortho = boundary_distance(w2, normalize_boundaries(s2, {"x"}));
  CHECK(ortho.per_attribute[0] == doctest::Approx(2.0).epsilon(1e-15));

  Matrix wr = rng.gaussian(10, 4);
  BoundaryMatrix sr = normalize_boundaries(rng.gaussian(10, 4), {"a", "b", "c", "d"});
  BoundaryDistance dist = boundary_distance(wr, sr);
  double sum = 0.0;
  for (double d : dist.per_attribute) sum += d;
  CHECK(std::abs(sum - dist.total) < 1e-12);
  CHECK(std::abs(dist.total - frobenius_norm_sq(wr - sr.s)) < 1e-10);
}

TEST_CASE("apply_edit basics and inverse") {
  Rng rng(4);
  Matrix w = haar_frame(8, 3, rng);
  std::vector<double> z = unit_vector(rng, 8);

  std::vector<double> same = apply_edit(EditRequest{z, 1, 0.0}, w);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(same[i] == z[i]);

  std::vector<double> forward = apply_edit(EditRequest{z, 2, 1.0}, w);
  std::vector<double> back = apply_edit(EditRequest{forward, 2, -1.0}, w);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(back[i] - z[i]) < 1e-12);

  std::vector<double> scaled = apply_edit(EditRequest{std::vector<double>(8, 0.0), 0, 2.0}, w);
  double norm = 0.0;
  for (double v : scaled) norm += v * v;
  CHECK(std::abs(std::sqrt(norm) - 2.0) < 1e-12);
}

TEST_CASE("apply_edit is linear in beta") {
  Rng rng(5);
  Matrix w = haar_frame(9, 2, rng);
  std::vector<double> z = unit_vector(rng, 9);
  const double b1 = 0.4;
  const double b2 = -1.1;
  std::vector<double> e1 = apply_edit(EditRequest{z, 0, b1}, w);
  std::vector<double> e2 = apply_edit(EditRequest{z, 0, b2}, w);
  std::vector<double> sum = apply_edit(EditRequest{z, 0, b1 + b2}, w);
  for (std::size_t i = 0; i < z.size(); ++i)
    CHECK(std::abs(e1[i] + e2[i] - z[i] - sum[i]) < 1e-12);
}

TEST_CASE("apply_edit rejects an out-of-range index") {
  Matrix w(5, 2);
  CHECK_THROWS_AS(apply_edit(EditRequest{std::vector<double>(5, 0.0), 2, 1.0}, w),
                  DimensionError);
}

TEST_CASE("controllability_check exact values") {
  Rng rng(6);
  std::vector<double> s = unit_vector(rng, 7);

  auto at_one = controllability_check(s, s, {1.0});
  CHECK(at_one[0].second == doctest::Approx(0.0).epsilon(1e-15));
  auto doubled = controllability_check(s, s, {2.0});
  CHECK(doubled[0].second == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> w = unit_vector(rng, 7);
  auto at_unit = controllability_check(w, s, {1.0});
  double d = 0.0;
  for (std::size_t i = 0; i < 7; ++i) d += (w[i] - s[i]) * (w[i] - s[i]);
  CHECK(at_unit[0].second == doctest::Approx(std::sqrt(d)).epsilon(1e-12));
}

TEST_CASE("controllability distance grows strictly beyond beta = 1") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w = unit_vector(rng, 6);
    std::vector<double> s = unit_vector(rng, 6);
    auto result = controllability_check(w, s, {1.0, 1.5});
    CHECK(result[1].second > result[0].second);
  }
}

TEST_CASE("controllability distances are monotone over increasing beta > 1") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w = unit_vector(rng, 5);
    std::vector<double> s = unit_vector(rng, 5);
    auto result = controllability_check(w, s, {3.0, 1.1, 2.0, 1.4});  // sorted internally
    for (std::size_t i = 1; i < result.size(); ++i) {
      CHECK(result[i].first > result[i - 1].first);
      CHECK(result[i].second > result[i - 1].second);
    }
  }
}

TEST_CASE("controllability_check enforces unit norms") {
  std::vector<double> w(4, 0.5);  // norm 1 exactly
  std::vector<double> bad(4, 1.0);
  CHECK_THROWS_AS(controllability_check(w, bad, {1.0}), ValueError);
  CHECK_THROWS_AS(controllability_check(bad, w, {1.0}), ValueError);
}
