#include "zap/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "zap/io.hpp"
#include "zap/oracle.hpp"
#include "zap/parallel.hpp"
#include "zap/rng.hpp"
#include "zap/svg.hpp"
#include "zap/version.hpp"

namespace zap::bench {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::PhaseM: return "phase_m";
    case Experiment::PhaseS: return "phase_s";
    case Experiment::SnrSweep: return "snr_sweep";
    case Experiment::BoundCompare: return "bound_compare";
    case Experiment::StepNoiseGrid: return "step_noise_grid";
    case Experiment::SolveOne: return "solve_one";
  }
  return "unknown";
}

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::ZapL1: return "zap_l1";
    case SolverKind::ZapL0: return "zap_l0";
    case SolverKind::Omp: return "omp";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::PhaseM, Experiment::PhaseS,
                       Experiment::SnrSweep, Experiment::BoundCompare,
                       Experiment::StepNoiseGrid, Experiment::SolveOne}) {
    if (to_string(e) == name) return e;
  }
  // Also accept dashed spellings used on the command line.
  std::string underscored = name;
  std::replace(underscored.begin(), underscored.end(), '-', '_');
  if (underscored != name) return parse_experiment(underscored);
  return std::nullopt;
}

std::optional<SolverKind> parse_solver(const std::string& name) {
  for (SolverKind s :
       {SolverKind::ZapL1, SolverKind::ZapL0, SolverKind::Omp}) {
    if (to_string(s) == name) return s;
  }
  std::string underscored = name;
  std::replace(underscored.begin(), underscored.end(), '-', '_');
  if (underscored != name) return parse_solver(underscored);
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (n < 1) throw Error("N must be positive");
  if (m_values.empty() || s_values.empty() || snr_db_values.empty() ||
      gamma_values.empty()) {
    throw Error("parameter ranges must be non-empty");
  }
  if (trials < 1) throw Error("trials must be at least 1");
  if (solvers.empty()) throw Error("at least one solver is required");
  for (Index m : m_values) {
    if (m < 1 || m > n) throw Error("every M must satisfy 1 <= M <= N");
  }
  for (Index s : s_values) {
    if (s < 1 || s > n) throw InvalidSparsity("every S must satisfy 1 <= S <= N");
  }
  for (double g : gamma_values) {
    if (!(g > 0.0)) throw Error("every gamma must be positive");
  }
  if (!(iter_budget > 0.0)) throw Error("iter_budget must be positive");
  if (max_iters_cap < 1) throw Error("max_iters_cap must be at least 1");
  if (!(l0_alpha > 0.0)) throw Error("l0_alpha must be positive");
}

std::size_t iters_for_gamma(const ExperimentConfig& config, double gamma) {
  const double raw = std::ceil(config.iter_budget / gamma);
  if (raw >= static_cast<double>(config.max_iters_cap)) {
    return config.max_iters_cap;
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

double reconstruction_snr(const Vector& x_true, const Vector& x_hat) {
  const double signal = x_true.norm();
  if (signal == 0.0) throw ZeroSignal("reference signal has zero energy");
  if (x_hat.size() != x_true.size()) {
    throw DimensionMismatch("signals differ in length");
  }
  const double err = (x_true - x_hat).norm();
  if (err < 1e-30) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(signal / err);
}

Vector omp_baseline(const RecoveryProblem& problem, Index max_atoms) {
  const Matrix& a = problem.a.entries();
  const Index m = a.rows();
  const Index n = a.cols();
  if (max_atoms < 1 || max_atoms > m) {
    throw Error("max_atoms must satisfy 1 <= max_atoms <= M");
  }
  const double y_norm = problem.y.norm();
  Vector x = Vector::Zero(n);
  if (y_norm == 0.0) return x;

  Vector col_norms(n);
  for (Index j = 0; j < n; ++j) col_norms(j) = a.col(j).norm();

  std::vector<Index> chosen;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  Vector residual = problem.y;
  Vector coeffs;
  for (Index k = 0; k < max_atoms; ++k) {
    Index best_j = -1;
    double best_score = -1.0;
    for (Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)] || col_norms(j) == 0.0) continue;
      const double score = std::abs(a.col(j).dot(residual)) / col_norms(j);
      if (score > best_score) {
        best_score = score;
        best_j = j;
      }
    }
    if (best_j < 0) break;
    used[static_cast<std::size_t>(best_j)] = true;
    chosen.push_back(best_j);
    Matrix sub(m, static_cast<Index>(chosen.size()));
    for (std::size_t c = 0; c < chosen.size(); ++c) {
      sub.col(static_cast<Index>(c)) = a.col(chosen[c]);
    }
    coeffs = sub.colPivHouseholderQr().solve(problem.y);
    residual = problem.y - sub * coeffs;
    if (residual.norm() <= 1e-8 * y_norm) break;
  }
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    x(chosen[c]) = coeffs(static_cast<Index>(c));
  }
  return x;
}

namespace {

struct Cell {
  Index m = 0;
  Index s = 0;
  double gamma = 0.0;
  double snr_db = 0.0;
};

std::vector<Cell> expand_grid(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  const Cell base{config.m_values.front(), config.s_values.front(),
                  config.gamma_values.front(), config.snr_db_values.front()};
  switch (config.experiment) {
    case Experiment::PhaseM:
      for (Index m : config.m_values) {
        Cell c = base;
        c.m = m;
        cells.push_back(c);
      }
      break;
    case Experiment::PhaseS:
      for (Index s : config.s_values) {
        Cell c = base;
        c.s = s;
        cells.push_back(c);
      }
      break;
    case Experiment::SnrSweep:
      for (double snr : config.snr_db_values) {
        Cell c = base;
        c.snr_db = snr;
        cells.push_back(c);
      }
      break;
    case Experiment::StepNoiseGrid:
      for (double gamma : config.gamma_values) {
        for (double snr : config.snr_db_values) {
          Cell c = base;
          c.gamma = gamma;
          c.snr_db = snr;
          cells.push_back(c);
        }
      }
      break;
    case Experiment::SolveOne:
      cells.push_back(base);
      break;
    case Experiment::BoundCompare:
      throw Error("bound_compare runs through run_bound_compare");
  }
  return cells;
}

struct TrialOutcome {
  std::vector<double> snr_db;   // per solver
  std::vector<bool> failed;
};

TrialOutcome run_trial(const ExperimentConfig& config, const Cell& cell,
                       std::uint64_t trial_seed) {
  TrialOutcome outcome;
  outcome.snr_db.assign(config.solvers.size(), 0.0);
  outcome.failed.assign(config.solvers.size(), true);

  MeasurementMatrix a =
      gen_gaussian_matrix(cell.m, config.n, derive_seed(trial_seed, 1));
  SparseSignal x = gen_sparse_signal(config.n, cell.s, derive_seed(trial_seed, 2));
  Vector y = a.entries() * x.values;
  double epsilon = 0.0;
  if (std::isfinite(cell.snr_db)) {
    NoisyObservation noisy =
        add_noise(y, cell.snr_db, derive_seed(trial_seed, 3));
    y = std::move(noisy.y);
    epsilon = noisy.epsilon;
  }
  RecoveryProblem problem(std::move(a), std::move(y), x, epsilon);

  for (std::size_t si = 0; si < config.solvers.size(); ++si) {
    try {
      Vector x_hat;
      switch (config.solvers[si]) {
        case SolverKind::ZapL1:
        case SolverKind::ZapL0: {
          SolverConfig sc;
          sc.gamma = cell.gamma;
          sc.max_iters = iters_for_gamma(config, cell.gamma);
          sc.record_every = sc.max_iters;  // only endpoints matter here
          sc.attracting = config.solvers[si] == SolverKind::ZapL1
                              ? AttractingTerm::l1()
                              : AttractingTerm::l0(config.l0_alpha);
          x_hat = solve(problem, sc).final_x;
          break;
        }
        case SolverKind::Omp: {
          const Index budget = config.omp_max_atoms > 0
                                   ? std::min(config.omp_max_atoms, cell.m)
                                   : std::min(cell.s, cell.m);
          x_hat = omp_baseline(problem, budget);
          break;
        }
      }
      outcome.snr_db[si] = reconstruction_snr(x.values, x_hat);
      outcome.failed[si] = false;
    } catch (const std::exception&) {
      // Counted as a failure in the report; the grid keeps running.
    }
  }
  return outcome;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config,
                                unsigned workers) {
  config.validate();
  if (workers == 0) workers = default_workers();

  const std::vector<Cell> cells = expand_grid(config);
  const std::size_t trials = config.trials;
  const std::size_t task_count = cells.size() * trials;

  std::vector<TrialOutcome> outcomes(task_count);
  parallel_for(task_count, workers, [&](std::size_t task) {
    const Cell& cell = cells[task / trials];
    outcomes[task] = run_trial(config, cell, derive_seed(config.master_seed, task));
  });

  const bool probability = config.experiment == Experiment::PhaseM ||
                           config.experiment == Experiment::PhaseS;
  ExperimentReport report;
  report.config = config;
  report.metric_name = probability ? "success" : "mean_snr_db";

  for (std::size_t c = 0; c < cells.size(); ++c) {
    ReportRow row;
    row.m = cells[c].m;
    row.s = cells[c].s;
    row.gamma = cells[c].gamma;
    row.snr_db = cells[c].snr_db;
    row.trials = trials;
    row.seed = derive_seed(config.master_seed, c * trials);
    row.metric.assign(config.solvers.size(), 0.0);
    row.failures.assign(config.solvers.size(), 0);
    for (std::size_t si = 0; si < config.solvers.size(); ++si) {
      double sum = 0.0;
      std::size_t ok = 0;
      std::size_t successes = 0;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        const TrialOutcome& out = outcomes[c * trials + trial];
        if (out.failed[si]) {
          ++row.failures[si];
          continue;
        }
        ++ok;
        sum += out.snr_db[si];
        if (out.snr_db[si] >= config.exact_recovery_threshold_db) ++successes;
      }
      row.metric[si] = probability
                           ? static_cast<double>(successes) /
                                 static_cast<double>(trials)
                           : (ok > 0 ? sum / static_cast<double>(ok)
                                     : std::numeric_limits<double>::quiet_NaN());
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

std::string join_floats(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += io::format_float(values[i]);
  }
  return out;
}

std::string join_indices(const std::vector<Index>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

void write_report_csv(const std::filesystem::path& path,
                      const ExperimentReport& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const ExperimentConfig& c = report.config;

  char stamp[64] = "unknown";
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  if (gmtime_r(&now, &tm_utc)) {
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  }

  out << "# version=" << kVersion << "\n";
  out << "# timestamp=" << stamp << "\n";
  out << "# experiment=" << to_string(c.experiment) << "\n";
  out << "# n=" << c.n << "\n";
  out << "# m_values=" << join_indices(c.m_values) << "\n";
  out << "# s_values=" << join_indices(c.s_values) << "\n";
  out << "# snr_db_values=" << join_floats(c.snr_db_values) << "\n";
  out << "# gamma_values=" << join_floats(c.gamma_values) << "\n";
  out << "# trials=" << c.trials << "\n";
  out << "# master_seed=" << c.master_seed << "\n";
  std::string solver_names;
  for (std::size_t i = 0; i < c.solvers.size(); ++i) {
    if (i) solver_names += ",";
    solver_names += to_string(c.solvers[i]);
  }
  out << "# solvers=" << solver_names << "\n";
  out << "# threshold_db=" << io::format_float(c.exact_recovery_threshold_db)
      << "\n";
  out << "# iter_budget=" << io::format_float(c.iter_budget) << "\n";
  out << "# max_iters_cap=" << c.max_iters_cap << "\n";
  out << "# l0_alpha=" << io::format_float(c.l0_alpha) << "\n";
  out << "# omp_max_atoms=" << c.omp_max_atoms << "\n";
  out << "# metric=" << report.metric_name << "\n";

  out << "m,n,s,gamma,snr_db,trials,seed";
  for (SolverKind s : c.solvers) {
    out << "," << report.metric_name << "_" << to_string(s);
  }
  for (SolverKind s : c.solvers) {
    out << ",failures_" << to_string(s);
  }
  out << "\n";
  for (const ReportRow& row : report.rows) {
    out << row.m << "," << c.n << "," << row.s << ","
        << io::format_float(row.gamma) << "," << io::format_float(row.snr_db)
        << "," << row.trials << "," << row.seed;
    for (double v : row.metric) out << "," << io::format_float(v);
    for (std::size_t f : row.failures) out << "," << f;
    out << "\n";
  }
}

BoundCompareResult run_bound_compare(Index n, Index m, Index s, double gamma,
                                     const std::vector<double>& mus,
                                     std::uint64_t seed, std::size_t iters,
                                     bool estimate) {
  MeasurementMatrix a = gen_gaussian_matrix(m, n, derive_seed(seed, 1));
  SparseSignal sig = gen_sparse_signal(n, s, derive_seed(seed, 2));
  Vector y = a.entries() * sig.values;

  BoundCompareResult result;
  Vector x_star;
  if (!estimate) {
    if (n > 12 || n - m > 2 || m >= n) {
      throw TooLarge(
          "exact constants need N <= 12, M < N and kernel dimension <= 2; "
          "rerun in estimate mode");
    }
    oracle::OracleSolution sol = oracle::l1_min_solution(a, y);
    if (!sol.unique) {
      throw NotMinimizer("the l1 minimizer of this instance is not unique; "
                         "pick another seed");
    }
    x_star = sol.x;
  } else {
    x_star = sig.values;
  }

  const Vector x0 = least_squares_point(a, y);
  const double start_dev = (x0 - x_star).norm();
  const double m0 = start_dev + 1.0;

  double t = 0.0;
  theory::TMode t_mode;
  double mp = 0.0;
  theory::MaxMode max_mode;
  ProjectionOperator p(a);
  if (!estimate) {
    std::tie(t, t_mode) = theory::estimate_t(a, x_star, m0);
    std::tie(mp, max_mode) = theory::max_psgn_norm_sq(p);
    result.certified = true;
  } else {
    std::tie(t, t_mode) =
        theory::estimate_t(a, x_star, m0, theory::Sampled{2000, derive_seed(seed, 3)});
    std::tie(mp, max_mode) =
        theory::max_psgn_norm_sq(p, theory::Sampled{2000, derive_seed(seed, 4)});
    result.certified = false;
  }

  const double mu_for_constants = mus.empty() ? 2.0 : mus.front();
  result.constants =
      theory::constants(t, t_mode, mp, max_mode, mu_for_constants,
                        max_eig_gram_inverse(a), m0, n);

  RecoveryProblem problem(std::move(a), std::move(y), sig, 0.0);
  SolverConfig sc;
  sc.gamma = gamma;
  sc.max_iters = iters;
  sc.record_every = 1;
  Trajectory traj = solve(problem, sc, x0, x_star);
  result.actual_dev.reserve(traj.samples.size());
  for (const auto& sample : traj.samples) {
    result.actual_dev.push_back(sample.deviation);
  }

  for (double mu : mus) {
    result.const_mus.push_back(mu);
    result.const_bounds.push_back(theory::bound_sequence(
        start_dev, gamma, t, mp, theory::ConstMu{mu}, iters));
  }
  result.adaptive = theory::bound_sequence(start_dev, gamma, t, mp,
                                           theory::AdaptiveMu{}, iters);
  return result;
}

void write_bound_compare_csv(const std::filesystem::path& path,
                             const BoundCompareResult& result) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "# certified=" << (result.certified ? "true" : "false") << "\n";
  out << "iter,actual_dev";
  for (double mu : result.const_mus) out << ",bound_mu_" << io::format_float(mu);
  out << ",bound_adaptive,mu_n_minus_1\n";

  std::size_t rows = result.actual_dev.size();
  for (const auto& b : result.const_bounds) rows = std::max(rows, b.size());
  rows = std::max(rows, result.adaptive.size());

  for (std::size_t i = 0; i < rows; ++i) {
    out << i << ",";
    if (i < result.actual_dev.size()) {
      out << io::format_float(result.actual_dev[i]);
    }
    for (const auto& b : result.const_bounds) {
      out << ",";
      if (i < b.size()) out << io::format_float(b[i].dev);
    }
    out << ",";
    if (i < result.adaptive.size()) {
      out << io::format_float(result.adaptive[i].dev);
    }
    out << ",";
    if (i < result.adaptive.size()) {
      out << io::format_float(result.adaptive[i].mu_n - 1.0);
    }
    out << "\n";
  }
}

void write_bound_compare_svg(const std::filesystem::path& path,
                             const BoundCompareResult& result) {
  std::vector<svg::Series> series;
  svg::Series actual;
  actual.label = "actual";
  for (std::size_t i = 0; i < result.actual_dev.size(); ++i) {
    actual.points.emplace_back(static_cast<double>(i), result.actual_dev[i]);
  }
  series.push_back(std::move(actual));
  for (std::size_t k = 0; k < result.const_bounds.size(); ++k) {
    svg::Series s;
    s.label = "mu=" + io::format_float(result.const_mus[k]);
    for (const auto& pt : result.const_bounds[k]) {
      s.points.emplace_back(static_cast<double>(pt.iter), pt.dev);
    }
    series.push_back(std::move(s));
  }
  svg::Series adaptive;
  adaptive.label = "adaptive";
  for (const auto& pt : result.adaptive) {
    adaptive.points.emplace_back(static_cast<double>(pt.iter), pt.dev);
  }
  series.push_back(std::move(adaptive));

  svg::ChartOptions opts;
  opts.title = "Deviation vs bound sequences";
  opts.x_label = "iteration";
  opts.y_label = "deviation";
  opts.log_y = true;
  svg::write_line_chart(path, series, opts);

  svg::Series mu_trace;
  mu_trace.label = "mu_n - 1";
  for (const auto& pt : result.adaptive) {
    mu_trace.points.emplace_back(static_cast<double>(pt.iter),
                                 pt.mu_n - 1.0);
  }
  svg::ChartOptions mu_opts;
  mu_opts.title = "Adaptive mu_n - 1";
  mu_opts.x_label = "iteration";
  mu_opts.y_label = "mu_n - 1";
  mu_opts.log_y = true;
  std::filesystem::path mu_path = path;
  mu_path.replace_filename(path.stem().string() + "_mu" +
                           path.extension().string());
  svg::write_line_chart(mu_path, {mu_trace}, mu_opts);
}

}  // namespace zap::bench
