#include "semsub/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semsub/errors.hpp"

namespace semsub {

namespace {

double vector_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

BoundaryMatrix normalize_boundaries(const Matrix& raw, std::vector<std::string> labels) {
  if (labels.size() != raw.cols()) {
    std::ostringstream msg;
    msg << "normalize_boundaries: " << labels.size() << " labels for " << raw.cols()
        << " columns";
    throw DimensionError(msg.str());
  }
  Matrix s = raw;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    const double norm = column_norm(s, j);
    if (norm == 0.0)
      throw ValueError("normalize_boundaries: zero boundary column for attribute '" + labels[j] +
                       "'");
    for (std::size_t i = 0; i < s.rows(); ++i) s(i, j) /= norm;
  }
  return BoundaryMatrix{std::move(s), std::move(labels)};
}

BoundaryDistance boundary_distance(const Matrix& w, const BoundaryMatrix& s) {
  if (w.rows() != s.s.rows() || w.cols() != s.s.cols()) {
    std::ostringstream msg;
    msg << "boundary_distance: w is " << w.rows() << "x" << w.cols() << " but boundaries are "
        << s.s.rows() << "x" << s.s.cols();
    throw DimensionError(msg.str());
  }
  BoundaryDistance out;
  out.per_attribute.resize(w.cols());
  out.total = 0.0;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    double d = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const double diff = w(i, j) - s.s(i, j);
      d += diff * diff;
    }
    out.per_attribute[j] = d;
    out.total += d;
  }
  return out;
}

std::vector<double> apply_edit(const EditRequest& req, const Matrix& w) {
  if (req.z.size() != w.rows()) {
    std::ostringstream msg;
    msg << "apply_edit: latent has length " << req.z.size() << " but directions have "
        << w.rows() << " rows";
    throw DimensionError(msg.str());
  }
  if (req.direction_index >= w.cols()) {
    std::ostringstream msg;
    msg << "apply_edit: direction index " << req.direction_index << " out of range [0, "
        << w.cols() << ")";
    throw DimensionError(msg.str());
  }
  std::vector<double> out(req.z);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += req.beta * w(i, req.direction_index);
  return out;
}

std::vector<std::pair<double, double>> controllability_check(std::span<const double> w_col,
                                                             std::span<const double> s_col,
                                                             std::vector<double> betas) {
  if (w_col.size() != s_col.size())
    throw DimensionError("controllability_check: vector lengths differ");
  const double wn = vector_norm(w_col);
  const double sn = vector_norm(s_col);
  if (std::abs(wn - 1.0) > 1.0e-8 || std::abs(sn - 1.0) > 1.0e-8) {
    std::ostringstream msg;
    msg << "controllability_check: requires unit vectors, got norms " << wn << " and " << sn;
    throw ValueError(msg.str());
  }
  std::sort(betas.begin(), betas.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    double d = 0.0;
    for (std::size_t i = 0; i < w_col.size(); ++i) {
      const double diff = beta * w_col[i] - s_col[i];
      d += diff * diff;
    }
    out.emplace_back(beta, std::sqrt(d));
  }
  return out;
}

}  // namespace semsub
