#include "semsub/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semsub/errors.hpp"

namespace semsub {

double pearson_abs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DimensionError("pearson_abs: sequences have different lengths");
  const std::size_t n = x.size();
  if (n < 2) throw DimensionError("pearson_abs: need at least 2 samples");

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double cov = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0.0 || var_y == 0.0)
    throw ValueError("pearson_abs: constant sequence, correlation undefined");
  const double r = std::abs(cov / std::sqrt(var_x * var_y));
  return std::min(r, 1.0);
}

namespace {

void validate_delta_set(const DeltaSet& deltas) {
  if (deltas.attributes.empty() || deltas.attributes.size() != deltas.deltas.size())
    throw DimensionError("DeltaSet: attribute names and sequences must match and be non-empty");
  const std::size_t n = deltas.deltas.front().size();
  if (n < 2) throw DimensionError("DeltaSet: sequences need at least 2 samples");
  for (const auto& seq : deltas.deltas) {
    if (seq.size() != n) throw DimensionError("DeltaSet: sequences have different lengths");
    for (double v : seq) {
      if (!std::isfinite(v)) throw ValueError("DeltaSet: non-finite delta");
    }
  }
}

}  // namespace

CorrelationReport correlation_matrix(const DeltaSet& deltas) {
  validate_delta_set(deltas);
  const std::size_t k = deltas.attributes.size();

  CorrelationReport report{deltas.attributes, Matrix(k, k), std::vector<double>(k, 0.0), 0.0};
  for (std::size_t i = 0; i < k; ++i) report.corr(i, i) = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double r;
      try {
        r = pearson_abs(deltas.deltas[i], deltas.deltas[j]);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "correlation_matrix(" << deltas.attributes[i] << ", " << deltas.attributes[j]
            << "): " << e.what();
        throw ValueError(msg.str());
      }
      report.corr(i, j) = r;
      report.corr(j, i) = r;
    }
  }

  double overall = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != j) sum += report.corr(i, j);
    }
    report.column_avg[j] = k > 1 ? sum / static_cast<double>(k - 1) : 0.0;
    overall += sum;
  }
  report.overall_avg = k > 1 ? overall / static_cast<double>(k * (k - 1)) : 0.0;
  return report;
}

double identity_score(const EmbeddingPair& pair) {
  if (pair.e_ori.size() != pair.e_edit.size() || pair.e_ori.empty())
    throw DimensionError("identity_score: embeddings must be non-empty and of equal length");
  double norm_ori = 0.0;
  double norm_edit = 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < pair.e_ori.size(); ++i) {
    norm_ori += pair.e_ori[i] * pair.e_ori[i];
    norm_edit += pair.e_edit[i] * pair.e_edit[i];
    dot += pair.e_ori[i] * pair.e_edit[i];
  }
  if (std::abs(std::sqrt(norm_ori) - 1.0) > 1.0e-8 || std::abs(std::sqrt(norm_edit) - 1.0) > 1.0e-8)
    throw ValueError("identity_score: embeddings must be unit norm within 1e-8");
  return 1.0 - dot;
}

TraceSummary trace_summary(const SolveTrace& trace) {
  if (trace.records.empty()) throw ValueError("trace_summary: empty trace");
  TraceSummary out{};
  out.initial_objective = trace.records.front().objective;
  out.final_objective = trace.records.back().objective;
  out.total_drop = out.initial_objective - out.final_objective;
  out.max_step_increase = 0.0;
  bool first_step = true;
  for (std::size_t t = 1; t < trace.records.size(); ++t) {
    const double step = trace.records[t].objective - trace.records[t - 1].objective;
    if (first_step || step > out.max_step_increase) {
      out.max_step_increase = step;
      first_step = false;
    }
  }
  if (trace.records.size() < 2) out.max_step_increase = 0.0;
  return out;
}

}  // namespace semsub
