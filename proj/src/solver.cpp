#include "zap/solver.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "zap/io.hpp"

namespace zap {

Vector attract(const AttractingTerm& term, const Vector& x) {
  Vector out(x.size());
  if (term.kind == AttractingTerm::Kind::L1) {
    for (Index i = 0; i < x.size(); ++i) {
      const double v = x(i);
      out(i) = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
    return out;
  }
  const double a = term.alpha;
  const double inv_a = 1.0 / a;
  for (Index i = 0; i < x.size(); ++i) {
    const double v = x(i);
    if (v >= -inv_a && v < 0.0) {
      out(i) = -a * a * v - a;
    } else if (v > 0.0 && v <= inv_a) {
      out(i) = -a * a * v + a;
    } else {
      out(i) = 0.0;  // includes v == 0, where the piecewise formula is silent
    }
  }
  return out;
}

Vector zap_step(const Vector& x, const ProjectionOperator& p,
                const AttractingTerm& term, double gamma) {
  if (term.kind == AttractingTerm::Kind::L1) {
    return x - gamma * p.apply(attract(term, x));
  }
  // Attract, then project back onto the solution space of the input.
  const Matrix& a = p.source().entries();
  Vector x_hat = x - gamma * attract(term, x);
  return x_hat + p.pinv_apply(a * x - a * x_hat);
}

Trajectory solve(const RecoveryProblem& problem, const SolverConfig& config,
                 const std::optional<Vector>& x0,
                 const std::optional<Vector>& deviation_ref) {
  if (!(config.gamma > 0.0)) throw Error("step-size must be positive");
  if (config.max_iters < 1) throw Error("max_iters must be at least 1");
  if (config.record_every < 1) throw Error("record_every must be at least 1");

  const Matrix& a = problem.a.entries();
  const Vector& y = problem.y;
  const Index n = problem.a.cols();
  const Index m = problem.a.rows();
  ProjectionOperator p(problem.a);

  Vector x;
  if (x0) {
    if (x0->size() != n) {
      throw DimensionMismatch("warm start has wrong length");
    }
    const double r = (a * *x0 - y).norm();
    const double limit = std::max(problem.epsilon, 1e-8 * y.norm());
    if (r > limit) {
      throw InitOutOfSolutionSpace(
          "warm start residual " + io::format_float(r) +
          " exceeds the admissible bound " + io::format_float(limit));
    }
    x = *x0;
  } else {
    x = p.pinv_apply(y);
  }

  Trajectory traj;
  const bool l1_kind = config.attracting.kind == AttractingTerm::Kind::L1;
  const double gamma = config.gamma;
  const double plateau_limit = config.plateau_tol * gamma;

  auto record = [&](std::size_t iter, const Vector& xi) {
    TrajectorySample s;
    s.iter = iter;
    s.l1_norm = xi.lpNorm<1>();
    s.residual = (a * xi - y).norm();
    s.deviation = deviation_ref
                      ? (xi - *deviation_ref).norm()
                      : std::numeric_limits<double>::quiet_NaN();
    traj.samples.push_back(s);
    traj.iterates.push_back(xi);
  };

  record(0, x);

  const Matrix& q = p.row_basis();
  Vector s(n);
  Vector qs(m);
  Vector row_part(n);
  Vector step(n);

  std::size_t plateau_run = 0;
  std::size_t iter = 0;
  StopReason reason = StopReason::MaxIters;

  while (iter < config.max_iters) {
    double displacement = 0.0;
    if (l1_kind) {
      for (Index i = 0; i < n; ++i) {
        const double v = x(i);
        s(i) = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
      }
      qs.noalias() = q.transpose() * s;
      row_part.noalias() = q * qs;
      step = gamma * (s - row_part);  // gamma * P sgn(x)
      displacement = step.norm();
      x -= step;
    } else {
      Vector x_next = x - gamma * attract(config.attracting, x);
      x_next += p.pinv_apply(y - a * x_next);
      displacement = (x_next - x).norm();
      x.swap(x_next);
    }
    ++iter;
    if (iter % config.record_every == 0) record(iter, x);
    if (displacement <= plateau_limit) {
      if (++plateau_run >= config.plateau_window) {
        reason = StopReason::Plateau;
        break;
      }
    } else {
      plateau_run = 0;
    }
  }

  if (traj.samples.back().iter != iter) record(iter, x);
  traj.final_x = x;
  traj.iters = iter;
  traj.stop_reason = reason;
  return traj;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "iter,l1_norm,residual,deviation\n";
  for (const auto& s : t.samples) {
    out << s.iter << "," << io::format_float(s.l1_norm) << ","
        << io::format_float(s.residual) << ",";
    if (!std::isnan(s.deviation)) out << io::format_float(s.deviation);
    out << "\n";
  }
}

}  // namespace zap
