#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semsub/boundary.hpp"
#include "semsub/errors.hpp"
#include "semsub/matrix_io.hpp"
#include "semsub/metrics.hpp"
#include "semsub/rng.hpp"
#include "semsub/solver.hpp"
#include "semsub/svd.hpp"
#include "semsub/synth.hpp"

namespace py = pybind11;
using namespace semsub;

namespace {

using InputArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const InputArray& arr) {
  if (arr.ndim() != 2) throw DimensionError("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(arr.shape(0));
  const auto cols = static_cast<std::size_t>(arr.shape(1));
  std::vector<double> data(arr.data(), arr.data() + rows * cols);
  return Matrix(rows, cols, std::move(data));
}

py::array_t<double> to_array(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

SolverConfig make_config(double alpha, double lambda, std::size_t iters, double tol,
                         const std::string& init, std::uint64_t seed,
                         const std::string& variant) {
  SolverConfig config;
  config.alpha = alpha;
  config.lambda = lambda;
  config.max_iters = iters;
  config.rel_tol = tol;
  config.init_mode = init_mode_from_string(init);
  config.seed = seed;
  config.variant = variant_from_string(variant);
  return config;
}

py::dict result_to_dict(const SolveResult& result) {
  py::dict out;
  out["w"] = to_array(result.state.w);
  out["p"] = to_array(result.state.p);
  out["f"] = to_array(result.state.f);
  out["converged"] = result.converged;
  out["iterations_run"] = result.iterations_run;
  py::list objective, ortho, min_f, rel_drop;
  for (const auto& rec : result.trace.records) {
    objective.append(rec.objective);
    ortho.append(rec.ortho_residual);
    min_f.append(rec.min_f);
    rel_drop.append(rec.rel_drop);
  }
  py::dict trace;
  trace["objective"] = objective;
  trace["ortho_residual"] = ortho;
  trace["min_f"] = min_f;
  trace["rel_drop"] = rel_drop;
  trace["ridge_warning"] = result.trace.ridge_warning;
  out["trace"] = trace;
  return out;
}

std::vector<LinearScorer> scorers_from_weights(const Matrix& weights) {
  std::vector<LinearScorer> scorers;
  scorers.reserve(weights.cols());
  for (std::size_t j = 0; j < weights.cols(); ++j)
    scorers.push_back(LinearScorer{"attr" + std::to_string(j), weights.column(j), 0.0});
  return scorers;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semantic subspace solver: constrained alternating minimization for "
            "disentangled latent direction discovery, plus metrics and synthetic "
            "benchmark generators.";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
  py::register_exception<Error>(m, "SemsubError", PyExc_RuntimeError);

  m.def(
      "solve",
      [](InputArray z, InputArray s, double alpha, double lambda, std::size_t iters, double tol,
         const std::string& init, std::uint64_t seed, const std::string& variant) {
        return result_to_dict(solve_variant(to_matrix(z), to_matrix(s),
                                            make_config(alpha, lambda, iters, tol, init, seed,
                                                        variant)));
      },
      py::arg("z"), py::arg("s"), py::arg("alpha") = 0.5, py::arg("lambda_") = 1.0,
      py::arg("iters") = 30, py::arg("tol") = 1.0e-6, py::arg("init") = "svd",
      py::arg("seed") = 0, py::arg("variant") = "full",
      "Learn a semantic direction matrix from latents z (m x n) and boundary "
      "normals s (m x k); returns w, p, f and the per-iteration trace.");

  m.def(
      "solve_baseline",
      [](InputArray z, std::size_t k) {
        SolveState state = solve_baseline(to_matrix(z), k);
        py::dict out;
        out["w"] = to_array(state.w);
        out["p"] = to_array(state.p);
        out["f"] = to_array(state.f);
        return out;
      },
      py::arg("z"), py::arg("k"));

  m.def(
      "thin_svd",
      [](InputArray a) {
        ThinSvd svd = thin_svd(to_matrix(a));
        return py::make_tuple(to_array(svd.u), py::cast(svd.singular_values), to_array(svd.vt));
      },
      py::arg("a"));

  m.def(
      "truncated_svd",
      [](InputArray a, std::size_t k) {
        ThinSvd svd = truncated_svd(to_matrix(a), k);
        return py::make_tuple(to_array(svd.u), py::cast(svd.singular_values), to_array(svd.vt));
      },
      py::arg("a"), py::arg("k"));

  m.def(
      "solve_procrustes",
      [](InputArray a) { return to_array(solve_procrustes(to_matrix(a))); }, py::arg("a"));

  m.def(
      "project_nonneg", [](InputArray w) { return to_array(project_nonneg(to_matrix(w))); },
      py::arg("w"));

  m.def(
      "update_p",
      [](InputArray w, InputArray z) { return to_array(update_p(to_matrix(w), to_matrix(z))); },
      py::arg("w"), py::arg("z"));

  m.def(
      "evaluate_objective",
      [](InputArray z, InputArray w, InputArray p, InputArray f, InputArray s, double alpha,
         double lambda) {
        SolveState state{to_matrix(w), to_matrix(p), to_matrix(f)};
        return evaluate_objective(to_matrix(z), state, to_matrix(s), alpha, lambda);
      },
      py::arg("z"), py::arg("w"), py::arg("p"), py::arg("f"), py::arg("s"),
      py::arg("alpha") = 0.5, py::arg("lambda_") = 1.0);

  m.def(
      "pearson_abs",
      [](const std::vector<double>& x, const std::vector<double>& y) { return pearson_abs(x, y); },
      py::arg("x"), py::arg("y"), "Absolute Pearson correlation with population moments.");

  m.def(
      "correlation_matrix",
      [](const std::vector<std::vector<double>>& deltas,
         const std::vector<std::string>& attributes) {
        CorrelationReport report = correlation_matrix(DeltaSet{attributes, deltas});
        py::dict out;
        out["attributes"] = report.attributes;
        out["corr"] = to_array(report.corr);
        out["column_avg"] = report.column_avg;
        out["overall_avg"] = report.overall_avg;
        return out;
      },
      py::arg("deltas"), py::arg("attributes"));

  m.def(
      "identity_score",
      [](const std::vector<double>& e_ori, const std::vector<double>& e_edit) {
        return identity_score(EmbeddingPair{e_ori, e_edit});
      },
      py::arg("e_ori"), py::arg("e_edit"));

  m.def(
      "normalize_boundaries",
      [](InputArray raw) {
        Matrix m_raw = to_matrix(raw);
        std::vector<std::string> labels;
        for (std::size_t j = 0; j < m_raw.cols(); ++j)
          labels.push_back("attr" + std::to_string(j));
        return to_array(normalize_boundaries(m_raw, std::move(labels)).s);
      },
      py::arg("raw"));

  m.def(
      "apply_edit",
      [](const std::vector<double>& z, InputArray w, std::size_t index, double beta) {
        return apply_edit(EditRequest{z, index, beta}, to_matrix(w));
      },
      py::arg("z"), py::arg("w"), py::arg("index"), py::arg("beta"));

  m.def(
      "controllability_check",
      [](const std::vector<double>& w_col, const std::vector<double>& s_col,
         std::vector<double> betas) {
        return controllability_check(w_col, s_col, std::move(betas));
      },
      py::arg("w_col"), py::arg("s_col"), py::arg("betas"));

  m.def(
      "generate_planted",
      [](std::size_t m_dim, std::size_t k, std::size_t n, double rho, double noise_sigma,
         std::uint64_t seed, double boundary_noise, double code_scale, double neg_fraction) {
        PlantedModel model = make_planted_model(m_dim, k, rho, noise_sigma, seed, boundary_noise,
                                                code_scale, neg_fraction);
        SynthData data = generate(model, m_dim, k, n);
        Matrix scorer_weights(m_dim, k);
        for (std::size_t j = 0; j < k; ++j) scorer_weights.set_column(j, data.scorers[j].weights);
        py::dict out;
        out["z"] = to_array(data.z);
        out["s"] = to_array(data.s.s);
        out["scorers"] = to_array(scorer_weights);
        out["w_true"] = to_array(model.w_true);
        return out;
      },
      py::arg("m") = 512, py::arg("k") = 5, py::arg("n") = 10000, py::arg("rho") = 0.0,
      py::arg("noise_sigma") = 0.0, py::arg("seed") = 0, py::arg("boundary_noise") = 0.05,
      py::arg("code_scale") = 0.05, py::arg("neg_fraction") = 0.2,
      "Synthetic benchmark instance with known ground-truth directions.");

  m.def(
      "sampled_edit_deltas",
      [](InputArray z, InputArray w, InputArray scorer_weights, double beta, double effect_noise,
         std::uint64_t seed) {
        DeltaSet deltas =
            sampled_edit_deltas(to_matrix(z), to_matrix(w),
                                scorers_from_weights(to_matrix(scorer_weights)), beta,
                                effect_noise, seed);
        py::dict out;
        out["attributes"] = deltas.attributes;
        out["deltas"] = deltas.deltas;
        return out;
      },
      py::arg("z"), py::arg("w"), py::arg("scorers"), py::arg("beta") = 0.3,
      py::arg("effect_noise") = 1.0e-3, py::arg("seed") = 0);

  m.def(
      "score_deltas",
      [](InputArray z, InputArray w, InputArray scorer_weights, double beta) {
        std::vector<DeltaSet> sets = score_deltas(
            to_matrix(z), to_matrix(w), scorers_from_weights(to_matrix(scorer_weights)), beta);
        py::list out;
        for (const auto& set : sets) {
          py::dict d;
          d["attributes"] = set.attributes;
          d["deltas"] = set.deltas;
          out.append(d);
        }
        return out;
      },
      py::arg("z"), py::arg("w"), py::arg("scorers"), py::arg("beta"));

  m.def(
      "brute_force_procrustes",
      [](InputArray a, std::size_t trials, std::uint64_t seed) {
        ProcrustesSearch search = brute_force_procrustes(to_matrix(a), trials, seed);
        return py::make_tuple(to_array(search.best_frame), search.best_value);
      },
      py::arg("a"), py::arg("trials"), py::arg("seed") = 0);

  m.def(
      "write_matrix",
      [](const std::string& path, InputArray m_in, const std::string& format) {
        write_matrix(path, to_matrix(m_in), format_from_string(format));
      },
      py::arg("path"), py::arg("m"), py::arg("format") = "ufmx");

  m.def(
      "read_matrix", [](const std::string& path) { return to_array(read_matrix_auto(path)); },
      py::arg("path"));
}
