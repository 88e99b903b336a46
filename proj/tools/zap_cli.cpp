#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zap/bench.hpp"
#include "zap/io.hpp"
#include "zap/oracle.hpp"
#include "zap/rng.hpp"
#include "zap/signals.hpp"
#include "zap/solver.hpp"
#include "zap/svg.hpp"
#include "zap/theory.hpp"
#include "zap/version.hpp"

namespace {

// Flag-level misuse that should exit with code 2 rather than 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenArgs {
  std::string out;
  zap::Index n = 200;
  zap::Index m = 80;
  zap::Index s = 10;
  double p = 0.0;   // > 0 switches to a compressible signal
  double r = 1.0;
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

int run_gen(const GenArgs& args) {
  zap::MeasurementMatrix a =
      zap::gen_gaussian_matrix(args.m, args.n, zap::derive_seed(args.seed, 1));
  zap::TruthSignal truth;
  if (args.p > 0.0) {
    truth = zap::gen_compressible_signal(args.n, args.p, args.r,
                                         zap::derive_seed(args.seed, 2));
  } else {
    truth = zap::gen_sparse_signal(args.n, args.s, zap::derive_seed(args.seed, 2));
  }
  zap::Vector y = a.entries() * zap::truth_values(truth);
  double epsilon = 0.0;
  if (std::isfinite(args.snr_db)) {
    auto noisy = zap::add_noise(y, args.snr_db, zap::derive_seed(args.seed, 3));
    y = std::move(noisy.y);
    epsilon = noisy.epsilon;
  }
  zap::RecoveryProblem problem(std::move(a), std::move(y), truth, epsilon);
  zap::io::KvPairs meta;
  meta.emplace_back("seed", std::to_string(args.seed));
  meta.emplace_back("snr_db", zap::io::format_float(args.snr_db));
  zap::save_problem(args.out, problem, meta);
  std::cout << "wrote problem to " << args.out << "\n";
  return 0;
}

struct SolveArgs {
  std::string problem;
  double gamma = 5e-4;
  std::size_t max_iters = 10000;
  std::size_t record_every = 1;
  std::size_t plateau_window = 200;
  double plateau_tol = 1.5;
  std::string attracting = "l1";
  double alpha = 5.0;
  std::string x0_path;
  std::string traj_out = "trajectory.csv";
  std::string final_out;
};

int run_solve(const SolveArgs& args) {
  zap::RecoveryProblem problem = zap::load_problem(args.problem);
  zap::SolverConfig config;
  config.gamma = args.gamma;
  config.max_iters = args.max_iters;
  config.record_every = args.record_every;
  config.plateau_window = args.plateau_window;
  config.plateau_tol = args.plateau_tol;
  if (args.attracting == "l1") {
    config.attracting = zap::AttractingTerm::l1();
  } else if (args.attracting == "l0") {
    config.attracting = zap::AttractingTerm::l0(args.alpha);
  } else {
    throw ConfigError("unknown attracting term: " + args.attracting);
  }
  std::optional<zap::Vector> x0;
  if (!args.x0_path.empty()) x0 = zap::io::read_vector_csv(args.x0_path);
  std::optional<zap::Vector> ref;
  if (problem.truth) ref = zap::truth_values(*problem.truth);

  zap::Trajectory traj = zap::solve(problem, config, x0, ref);
  zap::write_trajectory_csv(args.traj_out, traj);
  if (!args.final_out.empty()) {
    zap::io::write_vector_csv(args.final_out, traj.final_x);
  }
  const auto& last = traj.samples.back();
  std::cout << "stopped after " << traj.iters << " iterations ("
            << (traj.stop_reason == zap::StopReason::Plateau ? "plateau"
                                                             : "max_iters")
            << "), residual " << zap::io::format_float(last.residual)
            << ", l1 norm " << zap::io::format_float(last.l1_norm) << "\n";
  if (ref) {
    std::cout << "deviation from truth "
              << zap::io::format_float(last.deviation) << ", reconstruction "
              << zap::io::format_float(
                     zap::bench::reconstruction_snr(*ref, traj.final_x))
              << " dB\n";
  }
  return 0;
}

struct AnalyzeArgs {
  std::string problem;
  zap::Index s = 0;
  double mu = 2.0;
  double m0 = 0.0;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
  zap::RecoveryProblem problem = zap::load_problem(args.problem);
  const zap::Index n = problem.a.cols();
  const zap::Index m = problem.a.rows();

  zap::Index s = args.s;
  if (s == 0 && problem.truth &&
      std::holds_alternative<zap::SparseSignal>(*problem.truth)) {
    s = std::get<zap::SparseSignal>(*problem.truth).sparsity();
  }
  if (s == 0) throw ConfigError("--S is required when the problem has no sparse truth");

  zap::io::KvPairs kv;
  zap::theory::ConditionReport report =
      zap::theory::check_conditions(problem.a, s);
  kv.emplace_back("S", std::to_string(s));
  kv.emplace_back("coherence", zap::io::format_float(report.coherence));
  kv.emplace_back("coherence_ok", report.coherence_ok ? "true" : "false");
  if (report.delta_2s) {
    kv.emplace_back("delta_2S", zap::io::format_float(*report.delta_2s));
    kv.emplace_back("rip_ok", *report.rip_ok ? "true" : "false");
  }

  // Reference minimizer: certified oracle where feasible, otherwise the
  // stored truth.
  std::optional<zap::Vector> x_star;
  bool x_star_certified = false;
  if (n <= 12 && m < n) {
    auto sol = zap::oracle::l1_min_solution(problem.a, problem.y);
    if (sol.unique) {
      x_star = sol.x;
      x_star_certified = true;
    }
  }
  if (!x_star && problem.truth) x_star = zap::truth_values(*problem.truth);

  if (x_star) {
    const zap::Vector x0 = zap::least_squares_point(problem.a, problem.y);
    const double m0 =
        args.m0 > 0.0 ? args.m0 : (x0 - *x_star).norm() + 1.0;
    double t = 0.0;
    zap::theory::TMode t_mode;
    if (x_star_certified && n - m <= 2) {
      std::tie(t, t_mode) = zap::theory::estimate_t(problem.a, *x_star, m0);
    } else {
      std::tie(t, t_mode) = zap::theory::estimate_t(
          problem.a, *x_star, m0,
          zap::theory::Sampled{args.trials, zap::derive_seed(args.seed, 1)});
    }
    double mp = 0.0;
    zap::theory::MaxMode max_mode;
    zap::ProjectionOperator proj(problem.a);
    if (n <= 16) {
      std::tie(mp, max_mode) = zap::theory::max_psgn_norm_sq(proj);
    } else {
      std::tie(mp, max_mode) = zap::theory::max_psgn_norm_sq(
          proj,
          zap::theory::Sampled{args.trials, zap::derive_seed(args.seed, 2)});
    }
    auto tc = zap::theory::constants(t, t_mode, mp, max_mode, args.mu,
                                     zap::max_eig_gram_inverse(problem.a), m0,
                                     n);
    for (auto& pair : zap::theory::constants_kv(tc)) kv.push_back(pair);
  } else {
    kv.emplace_back("constants", "skipped (no reference minimizer available)");
  }

  if (args.out.empty()) {
    for (const auto& [key, value] : kv) std::cout << key << "=" << value << "\n";
  } else {
    zap::io::write_kv(args.out, kv);
  }
  return 0;
}

struct OracleArgs {
  std::string problem;
  std::string which = "both";
  std::string out_p0;
  std::string out_p1;
};

int run_oracle(const OracleArgs& args) {
  zap::RecoveryProblem problem = zap::load_problem(args.problem);
  auto print = [](const char* tag, const zap::oracle::OracleSolution& sol) {
    std::cout << tag << ": objective " << zap::io::format_float(sol.objective)
              << ", unique " << (sol.unique ? "true" : "false") << ", x = [";
    for (zap::Index i = 0; i < sol.x.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << zap::io::format_float(sol.x(i));
    }
    std::cout << "]\n";
  };
  if (args.which == "p0" || args.which == "both") {
    auto p0 = zap::oracle::sparsest_solution(problem.a, problem.y);
    print("P0", p0);
    if (!args.out_p0.empty()) zap::io::write_vector_csv(args.out_p0, p0.x);
  }
  if (args.which == "p1" || args.which == "both") {
    auto p1 = zap::oracle::l1_min_solution(problem.a, problem.y);
    print("P1", p1);
    if (!args.out_p1.empty()) zap::io::write_vector_csv(args.out_p1, p1.x);
  }
  return 0;
}

struct BenchArgs {
  std::string experiment;
  zap::bench::ExperimentConfig config;
  std::vector<double> mus = {1.5, 2.0, 4.0};
  std::size_t bound_iters = 20000;
  bool estimate = false;
  unsigned workers = 0;
  std::string out = "report.csv";
  std::string svg;
};

void write_report_svg(const std::string& path,
                      const zap::bench::ExperimentReport& report) {
  using zap::bench::Experiment;
  const auto& config = report.config;
  std::vector<zap::svg::Series> series;
  zap::svg::ChartOptions opts;
  opts.y_label = report.metric_name;
  opts.title = zap::bench::to_string(config.experiment);

  if (config.experiment == Experiment::StepNoiseGrid) {
    opts.x_label = "log10(gamma)";
    for (std::size_t si = 0; si < config.solvers.size(); ++si) {
      for (double snr : config.snr_db_values) {
        zap::svg::Series s;
        s.label = zap::bench::to_string(config.solvers[si]) + " snr=" +
                  zap::io::format_float(snr);
        for (const auto& row : report.rows) {
          if (row.snr_db == snr ||
              (std::isinf(row.snr_db) && std::isinf(snr))) {
            s.points.emplace_back(std::log10(row.gamma), row.metric[si]);
          }
        }
        series.push_back(std::move(s));
      }
    }
  } else {
    opts.x_label = config.experiment == Experiment::PhaseM  ? "M"
                   : config.experiment == Experiment::PhaseS ? "S"
                                                             : "snr_db";
    for (std::size_t si = 0; si < config.solvers.size(); ++si) {
      zap::svg::Series s;
      s.label = zap::bench::to_string(config.solvers[si]);
      for (const auto& row : report.rows) {
        double x = 0.0;
        switch (config.experiment) {
          case Experiment::PhaseM: x = static_cast<double>(row.m); break;
          case Experiment::PhaseS: x = static_cast<double>(row.s); break;
          default: x = row.snr_db; break;
        }
        s.points.emplace_back(x, row.metric[si]);
      }
      series.push_back(std::move(s));
    }
  }
  zap::svg::write_line_chart(path, series, opts);
}

int run_bench(const BenchArgs& args) {
  auto experiment = zap::bench::parse_experiment(args.experiment);
  if (!experiment) throw ConfigError("unknown experiment: " + args.experiment);

  if (*experiment == zap::bench::Experiment::BoundCompare) {
    auto result = zap::bench::run_bound_compare(
        args.config.n, args.config.m_values.front(),
        args.config.s_values.front(), args.config.gamma_values.front(),
        args.mus, args.config.master_seed, args.bound_iters, args.estimate);
    zap::bench::write_bound_compare_csv(args.out, result);
    if (!args.svg.empty()) zap::bench::write_bound_compare_svg(args.svg, result);
    std::cout << "wrote " << args.out
              << (result.certified ? " (certified constants)"
                                   : " (estimated constants)")
              << "\n";
    return 0;
  }

  zap::bench::ExperimentConfig config = args.config;
  config.experiment = *experiment;
  try {
    config.validate();
  } catch (const zap::Error& e) {
    throw ConfigError(e.what());
  }
  auto report = zap::bench::run_experiment(config, args.workers);
  zap::bench::write_report_csv(args.out, report);
  if (!args.svg.empty() &&
      config.experiment != zap::bench::Experiment::SolveOne) {
    write_report_svg(args.svg, report);
  }
  std::cout << "wrote " << args.out << " (" << report.rows.size()
            << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery toolkit built around the zero-point "
               "attracting projection iteration"};
  app.set_version_flag("--version", zap::kVersion);
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a seeded problem directory");
  gen->add_option("--out", gen_args.out, "Output directory")->required();
  gen->add_option("--N", gen_args.n, "Signal length");
  gen->add_option("--M", gen_args.m, "Measurement count");
  gen->add_option("--S", gen_args.s, "Sparsity of the planted signal");
  gen->add_option("--p", gen_args.p, "Compressible decay exponent in (0,1)");
  gen->add_option("--R", gen_args.r, "Compressible magnitude");
  gen->add_option("--snr-db", gen_args.snr_db,
                  "Measurement SNR in dB (inf for noiseless)");
  gen->add_option("--seed", gen_args.seed, "Master seed")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Run the solver on a problem directory");
  solve->add_option("--problem", solve_args.problem, "Problem directory")
      ->required();
  solve->add_option("--gamma", solve_args.gamma, "Step-size");
  solve->add_option("--max-iters", solve_args.max_iters, "Iteration cap");
  solve->add_option("--record-every", solve_args.record_every,
                    "Sampling stride for the trajectory");
  solve->add_option("--plateau-window", solve_args.plateau_window,
                    "Consecutive small steps before stopping");
  solve->add_option("--plateau-tol", solve_args.plateau_tol,
                    "Plateau threshold in units of gamma");
  solve->add_option("--attract", solve_args.attracting,
                    "Attracting term: l1 or l0");
  solve->add_option("--alpha", solve_args.alpha, "Strength of the l0 term");
  solve->add_option("--x0", solve_args.x0_path,
                    "Warm start vector CSV (must lie in the solution space)");
  solve->add_option("--traj", solve_args.traj_out, "Trajectory CSV path");
  solve->add_option("--final", solve_args.final_out, "Final iterate CSV path");

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand(
      "analyze", "Condition report and convergence constants for a problem");
  analyze->add_option("--problem", analyze_args.problem, "Problem directory")
      ->required();
  analyze->add_option("--S", analyze_args.s,
                      "Sparsity for the condition checks");
  analyze->add_option("--mu", analyze_args.mu, "Tradeoff parameter mu > 1");
  analyze->add_option("--m0", analyze_args.m0, "Deviation bound M0");
  analyze->add_option("--trials", analyze_args.trials,
                      "Samples for non-certified estimates");
  analyze->add_option("--seed", analyze_args.seed, "Seed for sampling");
  analyze->add_option("--out", analyze_args.out, "Output file (default stdout)");

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Brute-force P0/P1 reference solutions for a small problem");
  oracle_cmd->add_option("--problem", oracle_args.problem, "Problem directory")
      ->required();
  oracle_cmd->add_option("--which", oracle_args.which, "p0, p1 or both");
  oracle_cmd->add_option("--out-p0", oracle_args.out_p0, "P0 solution CSV");
  oracle_cmd->add_option("--out-p1", oracle_args.out_p1, "P1 solution CSV");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand(
      "bench", "Seeded experiment grids (phase-m, phase-s, snr-sweep, "
               "step-noise-grid, bound-compare, solve-one)");
  bench->set_config("--config", "", "Key=value config file");
  bench->add_option("experiment", bench_args.experiment, "Experiment name")
      ->required();
  bench->add_option("--seed", bench_args.config.master_seed, "Master seed")
      ->required();
  bench->add_option("--N", bench_args.config.n, "Signal length");
  bench->add_option("--M", bench_args.config.m_values, "Measurement counts")
      ->delimiter(',');
  bench->add_option("--S", bench_args.config.s_values, "Sparsities")
      ->delimiter(',');
  bench->add_option("--snr-db", bench_args.config.snr_db_values,
                    "Measurement SNRs in dB (inf allowed)")
      ->delimiter(',');
  bench->add_option("--gamma", bench_args.config.gamma_values, "Step-sizes")
      ->delimiter(',');
  bench->add_option("--trials", bench_args.config.trials, "Trials per cell");
  std::vector<std::string> solver_names;
  bench->add_option("--solvers", solver_names,
                    "Subset of zap_l1, zap_l0, omp")
      ->delimiter(',');
  bench->add_option("--threshold-db",
                    bench_args.config.exact_recovery_threshold_db,
                    "Exact-recovery threshold");
  bench->add_option("--iter-budget", bench_args.config.iter_budget,
                    "Iteration cap as a multiple of 1/gamma");
  bench->add_option("--max-iters-cap", bench_args.config.max_iters_cap,
                    "Absolute iteration cap");
  bench->add_option("--alpha", bench_args.config.l0_alpha,
                    "Strength of the l0 term");
  bench->add_option("--omp-atoms", bench_args.config.omp_max_atoms,
                    "OMP atom budget (0: use the cell sparsity)");
  bench->add_option("--workers", bench_args.workers,
                    "Worker threads (0: hardware)");
  bench->add_option("--mus", bench_args.mus,
                    "Constant-mu values for bound-compare")
      ->delimiter(',');
  bench->add_option("--iters", bench_args.bound_iters,
                    "Iterations for bound-compare");
  bench->add_flag("--estimate", bench_args.estimate,
                  "Accept non-certified sampled constants in bound-compare");
  bench->add_option("--out", bench_args.out, "Report CSV path");
  bench->add_option("--svg", bench_args.svg, "Chart SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (solve->parsed()) return run_solve(solve_args);
    if (analyze->parsed()) return run_analyze(analyze_args);
    if (oracle_cmd->parsed()) return run_oracle(oracle_args);
    if (bench->parsed()) {
      if (!solver_names.empty()) {
        bench_args.config.solvers.clear();
        for (const auto& name : solver_names) {
          auto solver = zap::bench::parse_solver(name);
          if (!solver) throw ConfigError("unknown solver: " + name);
          bench_args.config.solvers.push_back(*solver);
        }
      }
      return run_bench(bench_args);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
