"""Semantic subspace solver.

Learns disentangled semantic direction matrices from latent-vector samples by
alternating closed-form minimization of a boundary-regularized, orthogonality-
and non-negativity-constrained subspace objective. Ships the solver variants,
disentanglement metrics, and planted-model synthetic benchmarks.
"""

from semsub._core import (
    ConvergenceError,
    DimensionError,
    DivergenceError,
    SemsubError,
    apply_edit,
    brute_force_procrustes,
    controllability_check,
    correlation_matrix,
    evaluate_objective,
    generate_planted,
    identity_score,
    normalize_boundaries,
    pearson_abs,
    project_nonneg,
    read_matrix,
    sampled_edit_deltas,
    score_deltas,
    solve,
    solve_baseline,
    solve_procrustes,
    thin_svd,
    truncated_svd,
    update_p,
    write_matrix,
)

__all__ = [
    "ConvergenceError",
    "DimensionError",
    "DivergenceError",
    "SemsubError",
    "apply_edit",
    "brute_force_procrustes",
    "controllability_check",
    "correlation_matrix",
    "evaluate_objective",
    "generate_planted",
    "identity_score",
    "normalize_boundaries",
    "pearson_abs",
    "project_nonneg",
    "read_matrix",
    "sampled_edit_deltas",
    "score_deltas",
    "solve",
    "solve_baseline",
    "solve_procrustes",
    "thin_svd",
    "truncated_svd",
    "update_p",
    "write_matrix",
]
