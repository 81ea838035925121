#include "semsub/cli.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "semsub/boundary.hpp"
#include "semsub/errors.hpp"
#include "semsub/matrix_io.hpp"
#include "semsub/metrics.hpp"
#include "semsub/solver.hpp"
#include "semsub/synth.hpp"

namespace semsub::cli {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Option handling: one registry shared by every subcommand, so any key=value
// file written by one command (e.g. a synth manifest) stays loadable as
// --config for another. Unregistered keys are hard errors; silent typos in
// alpha/lambda would invalidate whole sweeps.
// ---------------------------------------------------------------------------

const std::set<std::string>& option_registry() {
  static const std::set<std::string> registry = {
      "alpha",    "lambda",    "iters",        "tol",         "k",
      "init",     "seed",      "variant",      "latents",     "boundaries",
      "scorers",  "directions", "w-true",      "out",         "out-f",
      "out-p",    "out-dir",   "trace",        "distances",   "beta",
      "format",   "config",    "no-boundary",  "m",           "n",
      "rho",      "noise-sigma", "boundary-noise", "effect-noise",
      "alphas",   "lambdas",   "embeddings-ori", "embeddings-edit", "ids-out",
      "index",
  };
  return registry;
}

class Options {
 public:
  void set(const std::string& key, const std::string& value) {
    if (option_registry().count(key) == 0)
      throw ConfigError("unknown option '" + key + "'");
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required option --" + key);
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_double(key, values_.at(key));
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = values_.at(key);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
      throw ConfigError("option --" + key + ": '" + text + "' is not an unsigned integer");
    return v;
  }

  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = values_.at(key);
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t comma = text.find(',', start);
      if (comma == std::string::npos) comma = text.size();
      const std::string item = text.substr(start, comma - start);
      if (item.empty()) throw ConfigError("option --" + key + ": empty list item");
      out.push_back(parse_double(key, item));
      start = comma + 1;
      if (comma == text.size()) break;
    }
    if (out.empty()) throw ConfigError("option --" + key + ": empty list");
    return out;
  }

  bool get_bool(const std::string& key) const {
    if (!has(key)) return false;
    const std::string& text = values_.at(key);
    if (text == "true" || text == "1" || text.empty()) return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("option --" + key + ": '" + text + "' is not a boolean");
  }

 private:
  static double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
      throw ConfigError("option --" + key + ": '" + text + "' is not a number");
    return v;
  }

  std::map<std::string, std::string> values_;
};

void load_config_file(Options& opts, const fs::path& path, const Options& overrides_from_cli) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open config file");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    std::size_t a = line.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t");
    line = line.substr(a, b - a + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << path.string() << ":" << line_no << ": expected key=value";
      throw ConfigError(msg.str());
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      const std::size_t x = s.find_first_not_of(" \t");
      const std::size_t y = s.find_last_not_of(" \t");
      s = x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    strip(key);
    strip(value);
    if (!overrides_from_cli.has(key)) opts.set(key, value);  // flags win over file
  }
}

Options parse_args(const std::vector<std::string>& args, std::size_t start) {
  Options cli_opts;
  for (std::size_t i = start; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + arg + "'");
    std::string key = arg.substr(2);
    std::string value;
    const std::size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else if (key == "no-boundary") {
      value = "true";  // bare boolean flag
    } else {
      if (i + 1 >= args.size()) throw ConfigError("option --" + key + " expects a value");
      value = args[++i];
    }
    cli_opts.set(key, value);
  }
  if (cli_opts.has("config")) {
    Options merged = cli_opts;
    load_config_file(merged, cli_opts.get_string("config"), cli_opts);
    return merged;
  }
  return cli_opts;
}

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (const char* env = std::getenv("SEMSUB_THREADS")) {
    std::size_t v = 0;
    const std::string text(env);
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || v == 0)
      throw ConfigError("SEMSUB_THREADS must be a positive integer");
    threads = v;
  }
  return std::max<std::size_t>(1, std::min(threads, jobs));
}

template <typename Fn>
void parallel_for(std::size_t jobs, Fn&& fn) {
  const std::size_t threads = worker_count(jobs);
  if (threads == 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

SolverConfig solver_config_from(const Options& opts) {
  SolverConfig config;
  config.alpha = opts.get_double("alpha", config.alpha);
  config.lambda = opts.get_double("lambda", config.lambda);
  config.max_iters = static_cast<std::size_t>(opts.get_u64("iters", config.max_iters));
  config.rel_tol = opts.get_double("tol", config.rel_tol);
  config.init_mode = init_mode_from_string(opts.get_string("init", "svd"));
  config.seed = opts.get_u64("seed", 0);
  config.variant = variant_from_string(opts.get_string("variant", "full"));
  return config;
}

MatrixFormat format_from(const Options& opts) {
  return format_from_string(opts.get_string("format", "ufmx"));
}

struct SolveInputs {
  Matrix z;
  Matrix s;  // zero matrix when --no-boundary
  std::vector<std::string> labels;
};

// Boundary columns are always renormalized at load; the solver never
// renormalizes during iteration.
SolveInputs load_solve_inputs(const Options& opts, SolverConfig& config) {
  Matrix z = read_matrix_auto(opts.get_string("latents"));
  if (opts.get_bool("no-boundary")) {
    config.lambda = 0.0;
    const std::size_t k = static_cast<std::size_t>(opts.get_u64("k", 0));
    if (k == 0) throw ConfigError("--no-boundary requires --k");
    Matrix s(z.rows(), k);
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < k; ++j) labels.push_back("attr" + std::to_string(j));
    return SolveInputs{std::move(z), std::move(s), std::move(labels)};
  }
  Matrix raw = read_matrix_auto(opts.get_string("boundaries"));
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < raw.cols(); ++j) labels.push_back("attr" + std::to_string(j));
  BoundaryMatrix bm = normalize_boundaries(raw, std::move(labels));
  if (opts.has("k") && opts.get_u64("k", 0) != bm.s.cols())
    throw ConfigError("--k disagrees with the boundary matrix width");
  return SolveInputs{std::move(z), std::move(bm.s), std::move(bm.labels)};
}

std::string trace_to_csv(const SolveTrace& trace) {
  std::string text;
  if (trace.ridge_warning) text += "# warning: singular normal equations, ridge 1e-10 applied\n";
  text += "iter,objective,ortho_residual,min_f,rel_drop\n";
  for (const auto& r : trace.records) {
    text += std::to_string(r.iteration);
    text += ',';
    text += fmt(r.objective);
    text += ',';
    text += fmt(r.ortho_residual);
    text += ',';
    text += fmt(r.min_f);
    text += ',';
    text += fmt(r.rel_drop);
    text += '\n';
  }
  return text;
}

std::vector<LinearScorer> load_scorers(const fs::path& path, std::size_t m) {
  Matrix weights = read_matrix_auto(path);
  if (weights.rows() != m)
    throw DimensionError(path.string() + ": scorer weights have " + std::to_string(weights.rows()) +
                         " rows, latents have " + std::to_string(m));
  std::vector<LinearScorer> scorers;
  scorers.reserve(weights.cols());
  for (std::size_t j = 0; j < weights.cols(); ++j)
    scorers.push_back(LinearScorer{"attr" + std::to_string(j), weights.column(j), 0.0});
  return scorers;
}

constexpr double kDefaultEffectNoise = 1.0e-3;
constexpr double kDefaultMetricsBeta = 0.3;
constexpr double kSparsityThreshold = 1.0e-6;

double average_correlation(const Matrix& z, const Matrix& w,
                           const std::vector<LinearScorer>& scorers, double beta,
                           double effect_noise, std::uint64_t seed) {
  DeltaSet deltas = sampled_edit_deltas(z, w, scorers, beta, effect_noise, seed);
  return correlation_matrix(deltas).overall_avg;
}

double sparsity_fraction(const Matrix& f) {
  std::size_t small = 0;
  for (double v : f.data())
    if (v < kSparsityThreshold) ++small;
  return static_cast<double>(small) / static_cast<double>(f.size());
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int cmd_solve(const Options& opts) {
  SolverConfig config = solver_config_from(opts);
  SolveInputs inputs = load_solve_inputs(opts, config);
  const MatrixFormat format = format_from(opts);

  SolveResult result = solve_variant(inputs.z, inputs.s, config);

  write_matrix(opts.get_string("out"), result.state.w, format);
  if (opts.has("out-f")) write_matrix(opts.get_string("out-f"), result.state.f, format);
  if (opts.has("out-p")) write_matrix(opts.get_string("out-p"), result.state.p, format);
  if (opts.has("trace")) write_text_file(opts.get_string("trace"), trace_to_csv(result.trace));
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const Options& opts) {
  SolverConfig base = solver_config_from(opts);
  SolveInputs inputs = load_solve_inputs(opts, base);

  std::vector<LinearScorer> scorers;
  if (opts.has("scorers")) scorers = load_scorers(opts.get_string("scorers"), inputs.z.rows());
  const double beta = opts.get_list("beta", {kDefaultMetricsBeta}).front();
  const double effect_noise = opts.get_double("effect-noise", kDefaultEffectNoise);

  std::vector<double> alphas = opts.get_list("alphas", {0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0});
  std::vector<double> lambdas = opts.get_list("lambdas", {1.0, 2.0, 4.0, 5.0});
  std::sort(alphas.begin(), alphas.end());
  std::sort(lambdas.begin(), lambdas.end());

  struct Cell {
    double alpha = 0.0;
    double lambda = 0.0;
    double final_j = 0.0;
    double avg_corr = 0.0;
    std::size_t iterations = 0;
    bool have_corr = false;
    bool numerical_failure = false;
    std::string status = "ok";
    bool ok = false;
  };
  std::vector<Cell> cells;
  for (double a : alphas)
    for (double l : lambdas) cells.push_back(Cell{a, l, 0, 0, 0, false, false, "ok", false});

  parallel_for(cells.size(), [&](std::size_t idx) {
    Cell& cell = cells[idx];
    try {
      SolverConfig config = base;
      config.alpha = cell.alpha;
      config.lambda = cell.lambda;
      SolveResult result = solve_variant(inputs.z, inputs.s, config);
      cell.final_j = result.trace.records.back().objective;
      cell.iterations = result.iterations_run;
      if (!scorers.empty()) {
        cell.avg_corr = average_correlation(inputs.z, result.state.w, scorers, beta, effect_noise,
                                            base.seed);
        cell.have_corr = true;
      }
      cell.ok = true;
    } catch (const ConvergenceError& e) {
      cell.status = std::string("error: ") + e.what();
      cell.numerical_failure = true;
    } catch (const DivergenceError& e) {
      cell.status = std::string("error: ") + e.what();
      cell.numerical_failure = true;
    } catch (const std::exception& e) {
      cell.status = std::string("error: ") + e.what();
    }
  });

  std::string text = "alpha,lambda,final_J,avg_corr,iterations_run,status\n";
  bool any_ok = false;
  bool any_numerical = false;
  for (const Cell& cell : cells) {
    any_ok = any_ok || cell.ok;
    any_numerical = any_numerical || cell.numerical_failure;
    text += fmt(cell.alpha);
    text += ',';
    text += fmt(cell.lambda);
    text += ',';
    text += cell.ok ? fmt(cell.final_j) : "nan";
    text += ',';
    text += cell.have_corr ? fmt(cell.avg_corr) : "nan";
    text += ',';
    text += std::to_string(cell.iterations);
    text += ',';
    text += cell.status;
    text += '\n';
  }
  write_text_file(opts.get_string("out"), text);
  if (any_ok) return 0;
  return any_numerical ? 3 : 2;
}

// ---------------------------------------------------------------------------
// ablate
// ---------------------------------------------------------------------------

int cmd_ablate(const Options& opts) {
  SolverConfig base = solver_config_from(opts);
  SolveInputs inputs = load_solve_inputs(opts, base);

  std::vector<LinearScorer> scorers;
  if (opts.has("scorers")) scorers = load_scorers(opts.get_string("scorers"), inputs.z.rows());
  const double beta = opts.get_list("beta", {kDefaultMetricsBeta}).front();
  const double effect_noise = opts.get_double("effect-noise", kDefaultEffectNoise);

  const std::vector<Variant> variants = {Variant::full, Variant::no_boundary, Variant::no_nonneg,
                                         Variant::no_orthogonality};
  struct Row {
    std::string variant;
    double avg_corr = 0.0;
    double final_j = 0.0;
    double sparsity = 0.0;
    bool have_corr = false;
    bool ok = false;
    bool numerical_failure = false;
    std::string status = "ok";
  };
  std::vector<Row> rows(variants.size());

  parallel_for(variants.size(), [&](std::size_t idx) {
    Row& row = rows[idx];
    row.variant = to_string(variants[idx]);
    try {
      SolverConfig config = base;
      config.variant = variants[idx];
      SolveResult result = solve_variant(inputs.z, inputs.s, config);
      row.final_j = result.trace.records.back().objective;
      row.sparsity = sparsity_fraction(result.state.f);
      if (!scorers.empty()) {
        row.avg_corr = average_correlation(inputs.z, result.state.w, scorers, beta, effect_noise,
                                           base.seed);
        row.have_corr = true;
      }
      row.ok = true;
    } catch (const ConvergenceError& e) {
      row.status = std::string("error: ") + e.what();
      row.numerical_failure = true;
    } catch (const DivergenceError& e) {
      row.status = std::string("error: ") + e.what();
      row.numerical_failure = true;
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  });

  std::string text = "variant,avg_corr,final_J,sparsity_fraction\n";
  bool any_ok = false;
  bool any_numerical = false;
  for (const Row& row : rows) {
    any_ok = any_ok || row.ok;
    any_numerical = any_numerical || row.numerical_failure;
    text += row.variant;
    text += ',';
    text += row.have_corr ? fmt(row.avg_corr) : "nan";
    text += ',';
    text += row.ok ? fmt(row.final_j) : "nan";
    text += ',';
    text += row.ok ? fmt(row.sparsity) : "nan";
    text += '\n';
  }
  write_text_file(opts.get_string("out"), text);
  if (any_ok) return 0;
  return any_numerical ? 3 : 2;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(const Options& opts) {
  const std::size_t m = static_cast<std::size_t>(opts.get_u64("m", 512));
  const std::size_t k = static_cast<std::size_t>(opts.get_u64("k", 5));
  const std::size_t n = static_cast<std::size_t>(opts.get_u64("n", 10000));
  const double rho = opts.get_double("rho", 0.0);
  const double noise_sigma = opts.get_double("noise-sigma", 0.0);
  const double boundary_noise = opts.get_double("boundary-noise", 0.05);
  const std::uint64_t seed = opts.get_u64("seed", 0);
  const MatrixFormat format = format_from(opts);
  const fs::path out_dir = opts.get_string("out-dir");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string() + ": cannot create directory");

  PlantedModel model = make_planted_model(m, k, rho, noise_sigma, seed, boundary_noise);
  SynthData data = generate(model, m, k, n);

  const std::string ext = format == MatrixFormat::ufmx ? ".ufmx" : ".csv";
  const fs::path z_path = out_dir / ("z" + ext);
  const fs::path s_path = out_dir / ("s" + ext);
  const fs::path scorer_path = out_dir / ("scorers" + ext);
  const fs::path w_true_path = out_dir / ("w_true" + ext);

  write_matrix(z_path, data.z, format);
  write_matrix(s_path, data.s.s, format);
  Matrix scorer_weights(m, k);
  for (std::size_t j = 0; j < k; ++j) scorer_weights.set_column(j, data.scorers[j].weights);
  write_matrix(scorer_path, scorer_weights, format);
  write_matrix(w_true_path, model.w_true, format);

  std::string manifest;
  manifest += "# planted-model manifest (synthetic benchmark construction)\n";
  manifest += "m=" + std::to_string(m) + "\n";
  manifest += "k=" + std::to_string(k) + "\n";
  manifest += "n=" + std::to_string(n) + "\n";
  manifest += "rho=" + fmt(rho) + "\n";
  manifest += "noise-sigma=" + fmt(noise_sigma) + "\n";
  manifest += "boundary-noise=" + fmt(boundary_noise) + "\n";
  manifest += "effect-noise=" + fmt(kDefaultEffectNoise) + "\n";
  manifest += "seed=" + std::to_string(seed) + "\n";
  manifest += "format=" + to_string(format) + "\n";
  manifest += "latents=" + z_path.string() + "\n";
  manifest += "boundaries=" + s_path.string() + "\n";
  manifest += "scorers=" + scorer_path.string() + "\n";
  manifest += "w-true=" + w_true_path.string() + "\n";
  write_text_file(out_dir / "manifest.cfg", manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

int cmd_metrics(const Options& opts) {
  Matrix z = read_matrix_auto(opts.get_string("latents"));
  Matrix w = read_matrix_auto(opts.get_string("directions"));
  std::vector<LinearScorer> scorers = load_scorers(opts.get_string("scorers"), z.rows());
  const double beta = opts.get_list("beta", {kDefaultMetricsBeta}).front();
  const double effect_noise = opts.get_double("effect-noise", kDefaultEffectNoise);
  const std::uint64_t seed = opts.get_u64("seed", 0);

  DeltaSet deltas = sampled_edit_deltas(z, w, scorers, beta, effect_noise, seed);

  // Constant sequences have no defined correlation; mark them instead of
  // failing so a single degenerate attribute cannot sink a report.
  const std::size_t k = deltas.attributes.size();
  std::vector<bool> defined(k, true);
  for (std::size_t a = 0; a < k; ++a) {
    const auto& seq = deltas.deltas[a];
    bool constant = true;
    for (double v : seq)
      if (v != seq.front()) {
        constant = false;
        break;
      }
    if (constant) {
      defined[a] = false;
      std::cerr << "warning: attribute '" << deltas.attributes[a]
                << "' has constant deltas; correlation undefined\n";
    }
  }

  DeltaSet kept;
  std::vector<std::size_t> kept_index;
  for (std::size_t a = 0; a < k; ++a) {
    if (!defined[a]) continue;
    kept.attributes.push_back(deltas.attributes[a]);
    kept.deltas.push_back(deltas.deltas[a]);
    kept_index.push_back(a);
  }

  std::optional<CorrelationReport> report;
  if (kept.attributes.size() >= 1) report = correlation_matrix(kept);
  std::vector<std::vector<std::string>> table(k, std::vector<std::string>(k, "undefined"));
  std::vector<std::string> avg_row(k, "undefined");
  if (report) {
    for (std::size_t i = 0; i < kept_index.size(); ++i) {
      for (std::size_t j = 0; j < kept_index.size(); ++j)
        table[kept_index[i]][kept_index[j]] = fmt(report->corr(i, j));
      avg_row[kept_index[i]] = fmt(report->column_avg[i]);
    }
  }

  std::string text;
  text += "# beta=" + fmt(beta) + " effect-noise=" + fmt(effect_noise) +
          " seed=" + std::to_string(seed) + "\n";
  text += "attribute";
  for (const auto& name : deltas.attributes) text += "," + name;
  text += "\n";
  for (std::size_t i = 0; i < k; ++i) {
    text += deltas.attributes[i];
    for (std::size_t j = 0; j < k; ++j) text += "," + table[i][j];
    text += "\n";
  }
  text += "Avg";
  for (std::size_t j = 0; j < k; ++j) text += "," + avg_row[j];
  text += "\n";
  write_text_file(opts.get_string("out"), text);

  if (opts.has("embeddings-ori") != opts.has("embeddings-edit"))
    throw ConfigError("--embeddings-ori and --embeddings-edit must be given together");
  if (opts.has("embeddings-ori")) {
    Matrix ori = read_matrix_auto(opts.get_string("embeddings-ori"));
    Matrix edit = read_matrix_auto(opts.get_string("embeddings-edit"));
    if (ori.rows() != edit.rows() || ori.cols() != edit.cols())
      throw DimensionError("embedding matrices have different shapes");
    std::vector<double> scores(ori.cols());
    double mean = 0.0;
    double lo = 2.0;
    double hi = 0.0;
    for (std::size_t j = 0; j < ori.cols(); ++j) {
      scores[j] = identity_score(EmbeddingPair{ori.column(j), edit.column(j)});
      mean += scores[j];
      lo = std::min(lo, scores[j]);
      hi = std::max(hi, scores[j]);
    }
    mean /= static_cast<double>(ori.cols());
    std::string ids_text = "# mean=" + fmt(mean) + " min=" + fmt(lo) + " max=" + fmt(hi) + "\n";
    ids_text += "index,ids\n";
    for (std::size_t j = 0; j < scores.size(); ++j)
      ids_text += std::to_string(j) + "," + fmt(scores[j]) + "\n";
    write_text_file(opts.get_string("ids-out", (fs::path(opts.get_string("out")).parent_path() /
                                                "ids.csv")
                                                   .string()),
                    ids_text);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// edit
// ---------------------------------------------------------------------------

int cmd_edit(const Options& opts) {
  Matrix w = read_matrix_auto(opts.get_string("directions"));
  Matrix latent = read_matrix_auto(opts.get_string("latents"));
  if (latent.cols() != 1)
    throw DimensionError("edit: latent file must hold a single column vector");
  Matrix raw_s = read_matrix_auto(opts.get_string("boundaries"));
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < raw_s.cols(); ++j) labels.push_back("attr" + std::to_string(j));
  BoundaryMatrix bm = normalize_boundaries(raw_s, std::move(labels));

  const std::size_t index = static_cast<std::size_t>(opts.get_u64("index", 0));
  const std::vector<double> betas = opts.get_list("beta", {-0.3, -0.2, 0.2, 0.3});
  const MatrixFormat format = format_from(opts);

  std::vector<double> z = latent.column(0);
  Matrix edited(latent.rows(), betas.size());
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const std::vector<double> out = apply_edit(EditRequest{z, index, betas[b]}, w);
    edited.set_column(b, out);
  }
  write_matrix(opts.get_string("out"), edited, format);

  if (index >= bm.s.cols())
    throw DimensionError("edit: direction index out of range for the boundary matrix");
  const std::vector<double> w_col = w.column(index);
  const std::vector<double> s_col = bm.s.column(index);
  const auto distances = controllability_check(w_col, s_col, betas);
  std::string text = "beta,distance\n";
  for (const auto& [beta, dist] : distances) text += fmt(beta) + "," + fmt(dist) + "\n";
  if (opts.has("distances")) write_text_file(opts.get_string("distances"), text);
  return 0;
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

void print_usage(std::ostream& out) {
  out << "usage: semsub <command> [--flag value ...]\n"
         "\n"
         "commands:\n"
         "  solve    learn a semantic direction matrix from latent samples\n"
         "  sweep    run an (alpha, lambda) grid of solves\n"
         "  ablate   run all solver variants on the same inputs\n"
         "  synth    generate a planted synthetic benchmark instance\n"
         "  metrics  disentanglement correlation report (and optional IDS)\n"
         "  edit     apply scaled edits to a latent vector\n"
         "\n"
         "common flags: --alpha --lambda --iters --tol --k --init {svd,random}\n"
         "  --seed --variant --latents PATH --boundaries PATH --out PATH\n"
         "  --trace PATH --beta LIST --format {ufmx,csv} --config PATH\n"
         "run 'semsub <command> --help' for the full per-command flag list.\n";
}

const std::map<std::string, std::string>& command_help() {
  static const std::map<std::string, std::string> help = {
      {"solve",
       "semsub solve --latents Z --boundaries S --out W\n"
       "  [--alpha F] [--lambda F] [--iters N] [--tol F] [--init svd|random]\n"
       "  [--seed N] [--variant V] [--no-boundary --k N] [--out-f PATH]\n"
       "  [--out-p PATH] [--trace PATH] [--format ufmx|csv] [--config PATH]\n"},
      {"sweep",
       "semsub sweep --latents Z --boundaries S --out CSV\n"
       "  [--alphas LIST] [--lambdas LIST] [--scorers PATH] [--beta F]\n"
       "  [--effect-noise F] [solver flags as in solve]\n"},
      {"ablate",
       "semsub ablate --latents Z --boundaries S --out CSV\n"
       "  [--scorers PATH] [--beta F] [--effect-noise F] [solver flags]\n"},
      {"synth",
       "semsub synth --out-dir DIR [--m N] [--k N] [--n N] [--rho F]\n"
       "  [--noise-sigma F] [--boundary-noise F] [--seed N] [--format ufmx|csv]\n"},
      {"metrics",
       "semsub metrics --latents Z --directions W --scorers PATH --out CSV\n"
       "  [--beta F] [--effect-noise F] [--seed N]\n"
       "  [--embeddings-ori PATH --embeddings-edit PATH [--ids-out PATH]]\n"},
      {"edit",
       "semsub edit --latents z --directions W --boundaries S --index N --out PATH\n"
       "  [--beta LIST] [--distances CSV] [--format ufmx|csv]\n"},
  };
  return help;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    if (args.empty() || args[0] == "--help" || args[0] == "help") {
      print_usage(std::cout);
      return args.empty() ? 2 : 0;
    }
    const std::string& command = args[0];
    if (command_help().count(command) == 0) {
      std::cerr << "error: unknown command '" << command << "'\n";
      print_usage(std::cerr);
      return 2;
    }
    if (args.size() > 1 && (args[1] == "--help" || args[1] == "help")) {
      std::cout << command_help().at(command);
      return 0;
    }
    const Options opts = parse_args(args, 1);
    if (command == "solve") return cmd_solve(opts);
    if (command == "sweep") return cmd_sweep(opts);
    if (command == "ablate") return cmd_ablate(opts);
    if (command == "synth") return cmd_synth(opts);
    if (command == "metrics") return cmd_metrics(opts);
    return cmd_edit(opts);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace semsub::cli
