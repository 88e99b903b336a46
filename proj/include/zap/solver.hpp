#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "zap/linalg.hpp"
#include "zap/signals.hpp"

namespace zap {

// Zero-point attracting term of the iteration. The L1 variant is the sign
// sub-gradient with sgn(0) = 0; the L0 variant is the piecewise approximate
// gradient of the l0 penalty with strength alpha, supported on |x| <= 1/alpha.
struct AttractingTerm {
  enum class Kind { L1, L0 };

  Kind kind = Kind::L1;
  double alpha = 1.0;

  static AttractingTerm l1() { return {Kind::L1, 0.0}; }
  static AttractingTerm l0(double alpha) {
    if (!(alpha > 0.0)) throw Error("l0 attracting strength must be positive");
    return {Kind::L0, alpha};
  }
};

// Entrywise attracting vector; the solver update subtracts gamma times this.
Vector attract(const AttractingTerm& term, const Vector& x);

struct SolverConfig {
  double gamma = 5e-4;  // step-size
  std::size_t max_iters = 10000;
  std::size_t plateau_window = 200;
  double plateau_tol = 1.5;  // in units of gamma
  AttractingTerm attracting = AttractingTerm::l1();
  std::size_t record_every = 1;
};

enum class StopReason { MaxIters, Plateau };

struct TrajectorySample {
  std::size_t iter = 0;
  double l1_norm = 0.0;
  double residual = 0.0;   // ||A x - y||_2, constant along the trajectory
  double deviation = 0.0;  // ||x - ref||_2, NaN when no reference is supplied
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<Vector> iterates;  // aligned with samples
  Vector final_x;
  std::size_t iters = 0;
  StopReason stop_reason = StopReason::MaxIters;
};

// One iteration x - gamma * P * attract(x). The input is assumed to lie in
// the solution space, so for the L0 variant the attract-then-reproject form
// and the combined form agree; the two-step form is used there.
Vector zap_step(const Vector& x, const ProjectionOperator& p,
                const AttractingTerm& term, double gamma);

// Runs the iteration from x0 (default: the least squares point) until
// max_iters, or until the step displacement stays below plateau_tol * gamma
// for plateau_window consecutive steps. A supplied x0 must already satisfy
// ||A x0 - y|| <= max(epsilon, 1e-8 ||y||).
Trajectory solve(const RecoveryProblem& problem, const SolverConfig& config,
                 const std::optional<Vector>& x0 = std::nullopt,
                 const std::optional<Vector>& deviation_ref = std::nullopt);

// Columns: iter, l1_norm, residual, deviation (empty when no reference).
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& t);

}  // namespace zap
