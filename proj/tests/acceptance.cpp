// Acceptance suite: every criterion prints one [PASS]/[FAIL] line and the
// binary exits with the number of failures. Run with --only <id> to execute
// a single criterion, or --freeze-reference to regenerate the stored
// phase-transition reference curve after an intentional change.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zap/bench.hpp"
#include "zap/oracle.hpp"
#include "zap/rng.hpp"
#include "zap/signals.hpp"
#include "zap/solver.hpp"
#include "zap/theory.hpp"

using namespace zap;

namespace {

#ifndef ZAP_TEST_DATA_DIR
#define ZAP_TEST_DATA_DIR "tests/data"
#endif

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& message) {
    if (!cond && ok) {
      ok = false;
      detail = message;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

// ---------------------------------------------------------------------------
// Shared instance construction for the exact-constant criteria.

struct ExactInstance {
  RecoveryProblem problem;
  Vector x_star;
  Vector x0;
  double start_dev = 0.0;
  double m0 = 0.0;
  double t = 0.0;
  double mp = 0.0;
  double lambda = 0.0;
};

std::optional<ExactInstance> make_exact_instance(Index n, Index m, Index s,
                                                 std::uint64_t seed,
                                                 double snr_db) {
  auto a = gen_gaussian_matrix(m, n, derive_seed(seed, 1));
  auto sig = gen_sparse_signal(n, s, derive_seed(seed, 2));
  Vector y = a.entries() * sig.values;
  double epsilon = 0.0;
  if (std::isfinite(snr_db)) {
    auto noisy = add_noise(y, snr_db, derive_seed(seed, 3));
    y = std::move(noisy.y);
    epsilon = noisy.epsilon;
  }
  const auto sol = oracle::l1_min_solution(a, y);
  if (!sol.unique) return std::nullopt;

  Vector x0 = least_squares_point(a, y);
  const double start_dev = (x0 - sol.x).norm();
  const double m0 = start_dev + 1.0;
  double t = 0.0;
  try {
    t = theory::estimate_t(a, sol.x, m0).first;
  } catch (const NotMinimizer&) {
    return std::nullopt;
  }
  ProjectionOperator p(a);
  const double mp = theory::max_psgn_norm_sq(p).first;
  const double lambda = max_eig_gram_inverse(a);

  return ExactInstance{
      RecoveryProblem(std::move(a), std::move(y), sig, epsilon),
      sol.x,
      std::move(x0),
      start_dev,
      m0,
      t,
      mp,
      lambda};
}

// ---------------------------------------------------------------------------
// Criterion 9/12 share one experiment configuration and its CSV rendering.

bench::ExperimentConfig phase_m_config() {
  bench::ExperimentConfig config;
  config.experiment = bench::Experiment::PhaseM;
  config.n = 200;
  config.m_values = {40, 50, 60, 70, 80, 90, 100, 110, 120};
  config.s_values = {10};
  config.gamma_values = {5e-4};
  config.trials = 50;
  config.master_seed = 20260810;
  config.solvers = {bench::SolverKind::ZapL1};
  config.exact_recovery_threshold_db = 40.0;
  config.iter_budget = 6.0;
  config.max_iters_cap = 2000000;
  return config;
}

std::string report_to_csv_string(const bench::ExperimentReport& report) {
  const auto path =
      std::filesystem::temp_directory_path() / "zap_acceptance_report.csv";
  bench::write_report_csv(path, report);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::filesystem::remove(path);
  return ss.str();
}

std::string strip_timestamp(const std::string& text) {
  std::string out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    if (line.rfind("# timestamp=", 0) == 0) continue;
    out += line;
    out += "\n";
  }
  return out;
}

std::filesystem::path reference_path() {
  return std::filesystem::path(ZAP_TEST_DATA_DIR) / "phase_m_reference.csv";
}

std::string g_phase_m_csv;  // filled by criterion 9, reused by criterion 12

// ---------------------------------------------------------------------------

Check criterion_1_projection_algebra() {
  Check c;
  for (std::uint64_t i = 0; i < 100 && c.ok; ++i) {
    MeasurementMatrix a = gen_gaussian_matrix(20, 50, derive_seed(1001, i));
    ProjectionOperator p(a);
    Rng rng(derive_seed(2001, i));
    Vector v(50);
    for (Index k = 0; k < 50; ++k) v(k) = rng.normal();
    const Vector pv = p.apply(v);
    c.require((p.apply(pv) - pv).norm() <= 1e-10 * v.norm(),
              "idempotence failed at seed " + std::to_string(i));
    c.require((a.entries() * pv).norm() <= 1e-10 * v.norm(),
              "annihilation failed at seed " + std::to_string(i));
    c.require(pv.norm() <= v.norm() * (1.0 + 1e-14),
              "expansion at seed " + std::to_string(i));
  }
  return c;
}

Check criterion_2_solution_space_invariance() {
  Check c;
  for (std::uint64_t run = 0; run < 20 && c.ok; ++run) {
    auto a = gen_gaussian_matrix(80, 200, derive_seed(3001, run));
    auto sig = gen_sparse_signal(200, 10, derive_seed(3002, run));
    Vector y = a.entries() * sig.values;
    RecoveryProblem problem(std::move(a), std::move(y), sig, 0.0);
    const double y_norm = problem.y.norm();
    for (auto term : {AttractingTerm::l1(), AttractingTerm::l0(5.0)}) {
      SolverConfig config;
      config.gamma = 5e-4;
      config.max_iters = 2000;
      config.record_every = 1;
      config.plateau_window = 1u << 30;  // disable early stopping
      config.attracting = term;
      Trajectory traj = solve(problem, config);
      double max_residual = 0.0;
      for (const auto& sample : traj.samples) {
        max_residual = std::max(max_residual, sample.residual);
      }
      c.require(max_residual <= 1e-8 * y_norm,
                "residual " + fmt(max_residual) + " vs bound " +
                    fmt(1e-8 * y_norm) + " at run " + std::to_string(run));
    }
  }
  return c;
}

struct DescentData {
  std::vector<ExactInstance> instances;
  std::vector<Trajectory> trajectories;
  std::size_t attempts = 0;
};

std::optional<DescentData> g_descent_data;

const DescentData& descent_data() {
  if (!g_descent_data) {
    DescentData data;
    std::uint64_t attempt = 0;
    while (data.instances.size() < 20 && attempt < 60) {
      auto inst = make_exact_instance(
          8, 6, 2, derive_seed(4001, attempt),
          std::numeric_limits<double>::infinity());
      ++attempt;
      if (!inst) continue;
      SolverConfig config;
      config.gamma = 1e-4;
      config.max_iters = 200000;
      config.record_every = 1;
      config.plateau_window = 1u << 30;
      Trajectory traj =
          solve(inst->problem, config, inst->x0, inst->x_star);
      data.trajectories.push_back(std::move(traj));
      data.instances.push_back(std::move(*inst));
    }
    data.attempts = attempt;
    g_descent_data = std::move(data);
  }
  return *g_descent_data;
}

Check criterion_3_theorem4_descent() {
  Check c;
  const auto& data = descent_data();
  c.require(data.instances.size() == 20,
            "could not assemble 20 unique-minimizer instances");
  if (!c.ok) return c;
  const double reseeds =
      static_cast<double>(data.attempts - data.instances.size());
  c.require(reseeds <= 0.2 * static_cast<double>(data.attempts),
            "re-seed rate " + fmt(reseeds / data.attempts) + " exceeds 20%");

  const double mu = 2.0;
  const double gamma = 1e-4;
  std::size_t checked_pairs = 0;
  for (std::size_t i = 0; i < data.instances.size() && c.ok; ++i) {
    const auto& inst = data.instances[i];
    const double k_gamma = mu / (2.0 * inst.t) * inst.mp * gamma;
    const double d = (mu - 1.0) * inst.mp;
    const auto& samples = data.trajectories[i].samples;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
      const double dev_n = samples[k].deviation;
      if (dev_n < k_gamma) continue;
      const double dev_next = samples[k + 1].deviation;
      ++checked_pairs;
      if (!(dev_next * dev_next <= dev_n * dev_n - d * gamma * gamma)) {
        c.require(false, "descent violated at instance " + std::to_string(i) +
                             " iteration " + std::to_string(k));
        break;
      }
    }
  }
  c.require(checked_pairs > 0, "no iterations fell in the descent regime");
  return c;
}

Check criterion_4_theorem5_chain() {
  Check c;
  const auto& data = descent_data();
  c.require(data.instances.size() == 20, "descent instances unavailable");
  if (!c.ok) return c;
  for (std::size_t i = 0; i < data.instances.size() && c.ok; ++i) {
    const auto& inst = data.instances[i];
    ProjectionOperator p(inst.problem.a);
    Rng rng(derive_seed(4501, i));
    Vector noise(8);
    double sampled_min = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 10000; ++trial) {
      for (Index k = 0; k < 8; ++k) noise(k) = rng.normal();
      Vector u = p.apply(noise);
      const double norm = u.norm();
      if (norm < 1e-12) continue;
      u /= norm;
      const double r = inst.m0 * (1.0 - rng.uniform01());
      Vector x = inst.x_star + r * u;
      Vector sgn(8);
      for (Index k = 0; k < 8; ++k) {
        sgn(k) = x(k) > 0.0 ? 1.0 : (x(k) < 0.0 ? -1.0 : 0.0);
      }
      sampled_min = std::min(sampled_min, p.apply(sgn).norm());
    }
    const double max_norm = std::sqrt(inst.mp);
    c.require(inst.t <= sampled_min + 1e-9,
              "t " + fmt(inst.t) + " above the sampled minimum " +
                  fmt(sampled_min) + " at instance " + std::to_string(i));
    c.require(sampled_min <= max_norm + 1e-9,
              "sampled minimum above the exact maximum at instance " +
                  std::to_string(i));
    c.require(max_norm <= std::sqrt(8.0) + 1e-9,
              "maximum above sqrt(N) at instance " + std::to_string(i));
  }
  return c;
}

Check criterion_5_oracle_convergence() {
  Check c;
  const double gamma = 1e-5;
  const double mu = 2.0;
  std::size_t done = 0;
  std::uint64_t attempt = 0;
  while (done < 10 && attempt < 30 && c.ok) {
    auto inst = make_exact_instance(8, 6, 1, derive_seed(5001, attempt),
                                    std::numeric_limits<double>::infinity());
    ++attempt;
    if (!inst) continue;
    SolverConfig config;
    config.gamma = gamma;
    config.max_iters = 2000000;
    config.record_every = 100000;
    Trajectory traj = solve(inst->problem, config, inst->x0, inst->x_star);
    const double final_dev = (traj.final_x - inst->x_star).norm();
    c.require(final_dev <= 1e-3,
              "final deviation " + fmt(final_dev) + " above 1e-3 at attempt " +
                  std::to_string(attempt - 1));
    const double k_gamma = mu / (2.0 * inst->t) * inst->mp * gamma;
    c.require(final_dev <= k_gamma,
              "final deviation " + fmt(final_dev) +
                  " outside the certified neighborhood " + fmt(k_gamma));
    ++done;
  }
  c.require(done == 10, "only " + std::to_string(done) + " instances ran");
  return c;
}

Check criterion_6_bound_dominance() {
  Check c;
  std::optional<bench::BoundCompareResult> result;
  for (std::uint64_t seed = 61; seed < 75 && !result; ++seed) {
    try {
      result = bench::run_bound_compare(8, 6, 2, 1e-4, {1.5, 2.0, 4.0}, seed,
                                        30000);
    } catch (const NotMinimizer&) {
    }
  }
  c.require(result.has_value(), "no certified instance found");
  if (!c.ok) return c;
  c.require(result->certified, "constants are not certified");

  const auto& adaptive = result->adaptive;
  for (std::size_t i = 0;
       i < std::min(adaptive.size(), result->actual_dev.size()); ++i) {
    if (!(result->actual_dev[i] <= adaptive[i].dev + 1e-12)) {
      c.require(false, "actual exceeds the adaptive bound at iteration " +
                           std::to_string(i));
      return c;
    }
  }
  for (std::size_t b = 0; b < result->const_bounds.size(); ++b) {
    const auto& fixed = result->const_bounds[b];
    for (std::size_t i = 0; i < std::min(adaptive.size(), fixed.size()); ++i) {
      if (!(adaptive[i].dev <= fixed[i].dev + 1e-12)) {
        c.require(false, "adaptive bound exceeds mu=" +
                             fmt(result->const_mus[b]) + " at iteration " +
                             std::to_string(i));
        return c;
      }
    }
    for (std::size_t i = 0;
         i < std::min(fixed.size(), result->actual_dev.size()); ++i) {
      if (!(result->actual_dev[i] <= fixed[i].dev + 1e-12)) {
        c.require(false, "actual exceeds mu=" + fmt(result->const_mus[b]) +
                             " at iteration " + std::to_string(i));
        return c;
      }
    }
  }
  for (std::size_t i = 1; i < adaptive.size(); ++i) {
    if (!(adaptive[i].mu_n < adaptive[i - 1].mu_n)) {
      c.require(false,
                "mu_n - 1 not strictly decreasing at iteration " +
                    std::to_string(i));
      return c;
    }
  }
  return c;
}

Check criterion_7_rate_bounds() {
  Check c;
  const auto& data = descent_data();
  c.require(data.instances.size() == 20, "descent instances unavailable");
  if (!c.ok) return c;
  const double gamma = 1e-4;
  const double mu = 2.0;
  std::size_t evaluated = 0;
  for (std::size_t i = 0; i < data.instances.size() && c.ok; ++i) {
    const auto& inst = data.instances[i];
    const double k0 = mu / (2.0 * inst.t) * inst.mp;
    const double k0_gamma = k0 * gamma;
    if (inst.start_dev <= k0_gamma) continue;  // nothing to travel
    const auto& samples = data.trajectories[i].samples;

    std::optional<std::size_t> entered;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      if (samples[k].deviation <= k0_gamma) {
        entered = k;
        break;
      }
    }
    c.require(entered.has_value(),
              "iterate never reached the K0 gamma ball at instance " +
                  std::to_string(i));
    if (!c.ok) break;
    const double bound6 = theory::rate_bound_theorem6(
        inst.start_dev, gamma, inst.t, inst.mp, k0);
    c.require(static_cast<double>(*entered) <= bound6,
              "measured " + std::to_string(*entered) + " steps above bound " +
                  fmt(bound6) + " at instance " + std::to_string(i));

    // Ball-to-ball trip: from 80% of the start deviation down to K0 gamma.
    const double k_max = 0.8 * inst.start_dev / gamma;
    if (k_max > k0) {
      std::optional<std::size_t> in_outer;
      for (std::size_t k = 0; k < samples.size(); ++k) {
        if (samples[k].deviation <= k_max * gamma) {
          in_outer = k;
          break;
        }
      }
      if (in_outer && *in_outer <= *entered) {
        const double bound2 =
            theory::rate_bound_lemma2(k_max, k0, inst.t, inst.mp);
        const double measured = static_cast<double>(*entered - *in_outer);
        c.require(measured <= bound2,
                  "ball-to-ball trip " + fmt(measured) + " above bound " +
                      fmt(bound2) + " at instance " + std::to_string(i));
      }
    }
    ++evaluated;
  }
  c.require(evaluated >= 10,
            "only " + std::to_string(evaluated) + " instances evaluated");
  return c;
}

Check criterion_8_theorem7_noisy_bound() {
  Check c;
  const double gamma = 1e-4;
  const double mu = 2.0;
  std::optional<ExactInstance> inst;
  std::uint64_t attempt = 0;
  while (!inst && attempt < 30) {
    inst = make_exact_instance(8, 6, 1, derive_seed(8001, attempt), 30.0);
    ++attempt;
  }
  c.require(inst.has_value(), "no unique-minimizer noisy instance found");
  if (!c.ok) return c;

  SolverConfig config;
  config.gamma = gamma;
  config.max_iters = 300000;
  config.record_every = 10000;
  Trajectory traj = solve(inst->problem, config, inst->x0, inst->x_star);
  const double final_dev = (traj.final_x - inst->x_star).norm();
  const double k_gamma = mu / (2.0 * inst->t) * inst->mp * gamma;
  const double c_noise =
      2.0 / inst->t * std::sqrt(8.0 * inst->lambda);
  const double bound = k_gamma + c_noise * inst->problem.epsilon;
  c.require(final_dev <= bound,
            "plateau deviation " + fmt(final_dev) + " above K gamma + C eps = " +
                fmt(bound));
  return c;
}

Check criterion_9_phase_transition(bool freeze) {
  Check c;
  const auto config = phase_m_config();
  const auto report = bench::run_experiment(config);
  g_phase_m_csv = report_to_csv_string(report);

  if (freeze) {
    std::filesystem::create_directories(reference_path().parent_path());
    std::ofstream out(reference_path());
    out << g_phase_m_csv;
    std::cout << "wrote reference curve to " << reference_path() << "\n";
    return c;
  }

  // Shape: nondecreasing in M up to one small inversion, high at M = 120.
  std::vector<double> probs;
  for (const auto& row : report.rows) probs.push_back(row.metric[0]);
  std::size_t inversions = 0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    if (probs[i + 1] < probs[i]) {
      ++inversions;
      c.require(probs[i] - probs[i + 1] <= 0.05,
                "inversion of " + fmt(probs[i] - probs[i + 1]) +
                    " between M=" + std::to_string(config.m_values[i]) +
                    " and M=" + std::to_string(config.m_values[i + 1]));
    }
  }
  c.require(inversions <= 1,
            std::to_string(inversions) + " inversions in the curve");
  c.require(probs.back() >= 0.95,
            "success probability " + fmt(probs.back()) + " at M=120");

  // The frozen calibration curve must be reproduced exactly.
  std::ifstream ref(reference_path());
  c.require(ref.good(), "missing reference curve " +
                            reference_path().string() +
                            " (run --freeze-reference once)");
  if (ref.good()) {
    std::stringstream ss;
    ss << ref.rdbuf();
    c.require(strip_timestamp(ss.str()) == strip_timestamp(g_phase_m_csv),
              "CSV differs from the frozen reference curve");
  }
  return c;
}

Check criterion_10_step_noise_grid() {
  Check c;
  bench::ExperimentConfig config;
  config.experiment = bench::Experiment::StepNoiseGrid;
  config.n = 100;
  config.m_values = {40};
  config.s_values = {5};
  config.gamma_values = {1e-2, 1e-3, 1e-4, 1e-5};
  config.snr_db_values = {20.0, 40.0,
                          std::numeric_limits<double>::infinity()};
  config.trials = 20;
  config.master_seed = 1010;
  config.solvers = {bench::SolverKind::ZapL1};
  config.iter_budget = 6.0;
  config.max_iters_cap = 2000000;
  const auto report = bench::run_experiment(config);

  auto cell = [&](double gamma, double snr) {
    for (const auto& row : report.rows) {
      const bool snr_match = std::isinf(snr) ? std::isinf(row.snr_db)
                                             : row.snr_db == snr;
      if (row.gamma == gamma && snr_match) return row.metric[0];
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  const double inf = std::numeric_limits<double>::infinity();
  double prev = -inf;
  for (double gamma : {1e-2, 1e-3, 1e-4, 1e-5}) {  // decreasing step-size
    const double v = cell(gamma, inf);
    c.require(v > prev, "noiseless mean SNR not strictly increasing at gamma " +
                            fmt(gamma) + " (" + fmt(v) + " after " +
                            fmt(prev) + ")");
    prev = v;
  }
  const double flat = std::abs(cell(1e-4, 20.0) - cell(1e-5, 20.0));
  c.require(flat <= 3.0,
            "20 dB curve is not flat: " + fmt(flat) + " dB difference");
  return c;
}

Check criterion_11_compressible_machinery() {
  Check c;
  const double p_grid[3] = {0.3, 0.5, 0.7};
  for (int i = 0; i < 20 && c.ok; ++i) {
    const double p = p_grid[i % 3];
    const double magnitude = 1.0 + 0.25 * (i % 4);
    const auto sig = gen_compressible_signal(
        100, p, magnitude, derive_seed(11001, static_cast<std::uint64_t>(i)));
    for (Index s : {Index{5}, Index{10}}) {
      const auto approx = best_s_approx(sig.values, s);
      const double c_p = 1.0 / (1.0 / p - 1.0);
      const double d_p = std::pow(2.0 / p - 1.0, -0.5);
      const double sd = static_cast<double>(s);
      c.require(approx.tail_l1 <=
                    c_p * magnitude * std::pow(sd, 1.0 - 1.0 / p) + 1e-12,
                "l1 tail bound failed at signal " + std::to_string(i));
      c.require(approx.tail_l2 <=
                    d_p * magnitude * std::pow(sd, 0.5 - 1.0 / p) + 1e-12,
                "l2 tail bound failed at signal " + std::to_string(i));
    }
  }
  // Measurement tail bound with an exhaustively computed RIP constant.
  for (std::uint64_t seed = 0; seed < 3 && c.ok; ++seed) {
    auto a = gen_gaussian_matrix(6, 12, derive_seed(11501, seed));
    const auto sig =
        gen_compressible_signal(12, 0.5, 1.0, derive_seed(11502, seed));
    const Index s = 3;
    const auto approx = best_s_approx(sig.values, s);
    const double delta_s = theory::rip_constant(a, s);
    const double lhs = (a.entries() * (sig.values - approx.x_s)).norm();
    const double rhs =
        std::sqrt(1.0 + delta_s) *
        (approx.tail_l2 + approx.tail_l1 / std::sqrt(static_cast<double>(s)));
    c.require(lhs <= rhs + 1e-12,
              "measurement tail bound failed at seed " + std::to_string(seed));
  }
  return c;
}

Check criterion_12_determinism() {
  Check c;
  const auto config = phase_m_config();
  if (g_phase_m_csv.empty()) {
    g_phase_m_csv = report_to_csv_string(bench::run_experiment(config));
  }
  const std::string base = strip_timestamp(g_phase_m_csv);
  const std::string w1 =
      strip_timestamp(report_to_csv_string(bench::run_experiment(config, 1)));
  c.require(w1 == base, "single-worker run differs from the baseline");
  const std::string w8 =
      strip_timestamp(report_to_csv_string(bench::run_experiment(config, 8)));
  c.require(w8 == base, "eight-worker run differs from the baseline");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  bool freeze = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--freeze-reference") == 0) freeze = true;
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
    }
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "projection algebra", criterion_1_projection_algebra},
      {2, "solution-space invariance", criterion_2_solution_space_invariance},
      {3, "theorem-4 descent with exact constants", criterion_3_theorem4_descent},
      {4, "theorem-5 norm chain", criterion_4_theorem5_chain},
      {5, "oracle convergence", criterion_5_oracle_convergence},
      {6, "bound-sequence dominance", criterion_6_bound_dominance},
      {7, "rate bounds", criterion_7_rate_bounds},
      {8, "theorem-7 noisy bound", criterion_8_theorem7_noisy_bound},
      {9, "phase-transition curve",
       [&] { return criterion_9_phase_transition(freeze); }},
      {10, "step-size/noise grid", criterion_10_step_noise_grid},
      {11, "compressible machinery", criterion_11_compressible_machinery},
      {12, "determinism and worker independence", criterion_12_determinism},
  };

  if (freeze) {
    criterion_9_phase_transition(true);
    return 0;
  }

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = criterion.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (result.ok ? "[PASS]" : "[FAIL]") << " criterion "
              << criterion.id << ": " << criterion.name << " ("
              << fmt(seconds) << " s)";
    if (!result.ok) std::cout << ": " << result.detail;
    std::cout << "\n" << std::flush;
    failures += result.ok ? 0 : 1;
  }
  return failures;
}
