#include "zap/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace zap::oracle {

namespace {

constexpr double kFitTolScale = 1e-8;
constexpr double kObjectiveGap = 1e-8;

// Lexicographic enumeration of size-k subsets of {0, ..., n-1}.
bool next_combination(std::vector<Index>& c, Index n) {
  const auto k = static_cast<Index>(c.size());
  for (Index i = k; i-- > 0;) {
    if (c[static_cast<std::size_t>(i)] < n - k + i) {
      ++c[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < k; ++j) {
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

Matrix columns(const Matrix& a, const std::vector<Index>& subset) {
  Matrix sub(a.rows(), static_cast<Index>(subset.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) {
    sub.col(static_cast<Index>(j)) = a.col(subset[j]);
  }
  return sub;
}

Vector embed(Index n, const std::vector<Index>& subset, const Vector& coeffs) {
  Vector x = Vector::Zero(n);
  for (std::size_t j = 0; j < subset.size(); ++j) {
    x(subset[j]) = coeffs(static_cast<Index>(j));
  }
  return x;
}

// Sign pattern with a zero band so round-off in a solve does not fabricate a
// distinct pattern.
std::vector<int> sign_pattern(const Vector& x) {
  const double band = 1e-9 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  std::vector<int> pat(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) {
    pat[static_cast<std::size_t>(i)] =
        x(i) > band ? 1 : (x(i) < -band ? -1 : 0);
  }
  return pat;
}

}  // namespace

OracleSolution sparsest_solution(const MeasurementMatrix& a, const Vector& y) {
  const Index n = a.cols();
  if (n > 14) {
    throw TooLarge("sparsest_solution enumeration is guarded at N <= 14");
  }
  if (y.size() != a.rows()) {
    throw DimensionMismatch("observation length does not match matrix rows");
  }
  const double tol = kFitTolScale * std::max(1.0, y.norm());

  if (y.norm() <= tol) {
    return {Vector::Zero(n), 0.0, true};
  }
  for (Index k = 1; k <= n; ++k) {
    bool found = false;
    OracleSolution best;
    std::vector<Index> subset(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
    do {
      const Matrix sub = columns(a.entries(), subset);
      const Vector c = sub.colPivHouseholderQr().solve(y);
      if ((sub * c - y).norm() > tol) continue;
      if (!found) {
        found = true;
        best = {embed(n, subset, c), static_cast<double>(k), true};
      } else {
        best.unique = false;
      }
    } while (next_combination(subset, n));
    if (found) return best;
  }
  throw Infeasible("no support fits the observation");
}

OracleSolution l1_min_solution(const MeasurementMatrix& a, const Vector& y) {
  const Index n = a.cols();
  const Index m = a.rows();
  if (n > 12) {
    throw TooLarge("l1_min_solution enumeration is guarded at N <= 12");
  }
  if (m >= n) {
    throw DimensionMismatch("l1_min_solution requires M < N");
  }
  if (y.size() != m) {
    throw DimensionMismatch("observation length does not match matrix rows");
  }

  bool found = false;
  OracleSolution best;
  std::vector<int> best_pattern;

  std::vector<Index> subset(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) subset[static_cast<std::size_t>(i)] = i;
  std::vector<std::pair<double, Vector>> candidates;
  do {
    const Matrix sub = columns(a.entries(), subset);
    Eigen::FullPivLU<Matrix> lu(sub);
    if (lu.rank() < m) continue;  // no basic solution on a singular support
    const Vector c = lu.solve(y);
    Vector x = embed(n, subset, c);
    candidates.emplace_back(x.lpNorm<1>(), std::move(x));
  } while (next_combination(subset, n));

  if (candidates.empty()) {
    throw Degenerate("every size-M submatrix is singular");
  }
  for (const auto& [obj, x] : candidates) {
    if (!found || obj < best.objective) {
      found = true;
      best = {x, obj, true};
    }
  }
  best_pattern = sign_pattern(best.x);
  for (const auto& [obj, x] : candidates) {
    if (obj <= best.objective + kObjectiveGap &&
        sign_pattern(x) != best_pattern) {
      best.unique = false;
      break;
    }
  }
  return best;
}

double g_value(const Vector& x, const Vector& x_star) {
  if (x.size() != x_star.size()) {
    throw DimensionMismatch("g_value operands differ in length");
  }
  const double dist = (x - x_star).norm();
  if (dist == 0.0) {
    throw DegenerateInput("g is undefined at x = x*");
  }
  return (x.lpNorm<1>() - x_star.lpNorm<1>()) / dist;
}

double G_value(const Vector& u, const Vector& x_star,
               const std::vector<Index>& support) {
  if (u.size() != x_star.size()) {
    throw DimensionMismatch("G_value operands differ in length");
  }
  if (std::abs(u.norm() - 1.0) > 1e-9) {
    throw DegenerateInput("direction must be a unit vector");
  }
  std::vector<bool> on_support(static_cast<std::size_t>(u.size()), false);
  double value = 0.0;
  for (Index k : support) {
    on_support[static_cast<std::size_t>(k)] = true;
    value += u(k) * (x_star(k) > 0.0 ? 1.0 : (x_star(k) < 0.0 ? -1.0 : 0.0));
  }
  for (Index i = 0; i < u.size(); ++i) {
    if (!on_support[static_cast<std::size_t>(i)]) value += std::abs(u(i));
  }
  return value;
}

}  // namespace zap::oracle
