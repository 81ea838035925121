#pragma once

#include <span>
#include <string>
#include <vector>

#include "semsub/matrix.hpp"
#include "semsub/solver.hpp"

namespace semsub {

// Named attribute-score difference sequences, all of equal length n >= 2.
struct DeltaSet {
  std::vector<std::string> attributes;
  std::vector<std::vector<double>> deltas;
};

// Absolute Pearson coefficients of a DeltaSet. The diagonal is recorded as
// 1 but excluded from every average.
struct CorrelationReport {
  std::vector<std::string> attributes;
  Matrix corr;                     // k x k, symmetric, entries in [0, 1]
  std::vector<double> column_avg;  // per column, excluding the diagonal
  double overall_avg;              // mean over all off-diagonal entries
};

struct EmbeddingPair {
  std::vector<double> e_ori;
  std::vector<double> e_edit;
};

// |corr(x, y)| with population (divide-by-n) covariance and standard
// deviations. A constant sequence makes the correlation undefined and is
// rejected rather than mapped to zero.
double pearson_abs(std::span<const double> x, std::span<const double> y);

CorrelationReport correlation_matrix(const DeltaSet& deltas);

// 1 − e_ori · e_edit for unit embeddings; in [0, 2], lower preserves
// identity better.
double identity_score(const EmbeddingPair& pair);

struct TraceSummary {
  double initial_objective;
  double final_objective;
  double total_drop;
  // Largest J_{t+1} − J_t over consecutive records; <= 1e-9 certifies
  // monotone descent. Zero for single-record traces.
  double max_step_increase;
};

TraceSummary trace_summary(const SolveTrace& trace);

}  // namespace semsub
