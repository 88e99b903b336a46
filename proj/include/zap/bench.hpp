#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zap/signals.hpp"
#include "zap/solver.hpp"
#include "zap/theory.hpp"

namespace zap::bench {

enum class Experiment { PhaseM, PhaseS, SnrSweep, BoundCompare, StepNoiseGrid,
                        SolveOne };
enum class SolverKind { ZapL1, ZapL0, Omp };

std::string to_string(Experiment e);
std::string to_string(SolverKind s);
std::optional<Experiment> parse_experiment(const std::string& name);
std::optional<SolverKind> parse_solver(const std::string& name);

struct ExperimentConfig {
  Experiment experiment = Experiment::PhaseM;
  Index n = 200;
  std::vector<Index> m_values = {80};
  std::vector<Index> s_values = {10};
  std::vector<double> snr_db_values = {
      std::numeric_limits<double>::infinity()};
  std::vector<double> gamma_values = {5e-4};
  std::size_t trials = 50;
  std::uint64_t master_seed = 0;
  std::vector<SolverKind> solvers = {SolverKind::ZapL1};
  double exact_recovery_threshold_db = 40.0;

  // Solver knobs. The iteration cap scales with the step-size: a solve runs
  // min(max_iters_cap, ceil(iter_budget / gamma)) iterations, since the
  // distance covered per iteration is proportional to gamma.
  double iter_budget = 6.0;
  std::size_t max_iters_cap = 2000000;
  double l0_alpha = 5.0;
  Index omp_max_atoms = 0;  // 0: use the cell sparsity S

  void validate() const;
};

std::size_t iters_for_gamma(const ExperimentConfig& config, double gamma);

struct ReportRow {
  Index m = 0;
  Index s = 0;
  double gamma = 0.0;
  double snr_db = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;  // derived seed of the cell's first trial
  std::vector<double> metric;          // one entry per configured solver
  std::vector<std::size_t> failures;   // one entry per configured solver
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string metric_name;  // "success" or "mean_snr_db"
  std::vector<ReportRow> rows;
};

// 20 log10(||x_true|| / ||x_true - x_hat||); +infinity once the error norm
// drops below 1e-30.
double reconstruction_snr(const Vector& x_true, const Vector& x_hat);

// Orthogonal matching pursuit with per-step re-projection; stops at
// max_atoms or when the residual falls below 1e-8 ||y||.
Vector omp_baseline(const RecoveryProblem& problem, Index max_atoms);

// Runs the seeded trial grid. Deterministic given the master seed regardless
// of the worker count; per-trial failures are counted, never fatal.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                unsigned workers = 0);

// CSV with a leading provenance block of '# key=value' lines. Every line is
// reproducible except the '# timestamp=' one.
void write_report_csv(const std::filesystem::path& path,
                      const ExperimentReport& report);

struct BoundCompareResult {
  std::vector<double> actual_dev;                 // indexed by iteration
  std::vector<std::vector<theory::BoundPoint>> const_bounds;
  std::vector<double> const_mus;
  std::vector<theory::BoundPoint> adaptive;
  theory::TheoryConstants constants;
  bool certified = false;  // exact t and exact max ||P sgn||^2
};

// Actual deviation trace against the bound sequences for the listed mu
// values plus the adaptive one. Exact constants require N <= 16 and kernel
// dimension <= 2; otherwise pass estimate = true to accept sampled,
// non-certified constants.
BoundCompareResult run_bound_compare(Index n, Index m, Index s, double gamma,
                                     const std::vector<double>& mus,
                                     std::uint64_t seed, std::size_t iters,
                                     bool estimate = false);

void write_bound_compare_csv(const std::filesystem::path& path,
                             const BoundCompareResult& result);
// Writes <stem>.svg with the deviation curves (log ordinate) and
// <stem>_mu.svg with the adaptive mu_n - 1 trace.
void write_bound_compare_svg(const std::filesystem::path& path,
                             const BoundCompareResult& result);

}  // namespace zap::bench
