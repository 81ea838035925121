#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semsub/matrix.hpp"

namespace semsub {

// Attribute boundary normals, one unit-norm column per attribute. Labels
// are opaque strings matched positionally to columns.
struct BoundaryMatrix {
  Matrix s;
  std::vector<std::string> labels;
};

struct EditRequest {
  std::vector<double> z;
  std::size_t direction_index = 0;
  double beta = 0.0;
};

// Scales every column of raw to unit ℓ2 norm. A zero column is an error
// naming the offending attribute.
BoundaryMatrix normalize_boundaries(const Matrix& raw, std::vector<std::string> labels);

struct BoundaryDistance {
  std::vector<double> per_attribute;  // ‖w_i − s_i‖₂² per column
  double total;                       // equals ‖w − s‖_F²
};

BoundaryDistance boundary_distance(const Matrix& w, const BoundaryMatrix& s);

// Returns z + beta * w[:, direction_index].
std::vector<double> apply_edit(const EditRequest& req, const Matrix& w);

// Distances ‖beta·w − s‖₂ per beta, returned sorted by beta. Both vectors
// must be unit norm within 1e-8 (the growth guarantee for beta > 1 only
// holds under unit norms).
std::vector<std::pair<double, double>> controllability_check(std::span<const double> w_col,
                                                             std::span<const double> s_col,
                                                             std::vector<double> betas);

}  // namespace semsub
