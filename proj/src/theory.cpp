#include "zap/theory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "zap/io.hpp"
#include "zap/oracle.hpp"
#include "zap/parallel.hpp"
#include "zap/rng.hpp"

namespace zap::theory {

namespace {

constexpr double kSubsetGuard = 1e6;

double binomial_capped(Index n, Index k, double cap) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double value = 1.0;
  for (Index i = 1; i <= k; ++i) {
    value *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (value > cap) return value;
  }
  return value;
}

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

}  // namespace

double rip_constant(const MeasurementMatrix& a, Index s) {
  const Index n = a.cols();
  if (s < 1) throw Error("sparsity must be positive");
  const Index size = std::min(s, n);
  if (binomial_capped(n, size, kSubsetGuard) > kSubsetGuard) {
    throw TooLarge("subset enumeration for the RIP constant exceeds 1e6");
  }
  // Eigenvalue interlacing puts the extremes over |T| <= S at |T| = S.
  std::vector<Index> subset(static_cast<std::size_t>(size));
  for (Index i = 0; i < size; ++i) subset[static_cast<std::size_t>(i)] = i;
  double delta = 0.0;
  do {
    Matrix sub(a.rows(), size);
    for (Index j = 0; j < size; ++j) {
      sub.col(j) = a.entries().col(subset[static_cast<std::size_t>(j)]);
    }
    const Matrix gram = sub.transpose() * sub;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(size - 1);
    delta = std::max({delta, hi - 1.0, 1.0 - lo});
  } while (next_combination(subset, n));
  return delta;
}

double coherence(const MeasurementMatrix& a) {
  const Index n = a.cols();
  Matrix b = a.entries();
  for (Index j = 0; j < n; ++j) {
    const double norm = b.col(j).norm();
    if (norm == 0.0) {
      throw ZeroColumn("column " + std::to_string(j) + " is zero");
    }
    b.col(j) /= norm;
  }
  const Matrix gram = b.transpose() * b;
  double mu = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      mu = std::max(mu, std::abs(gram(i, j)));
    }
  }
  return std::min(mu, 1.0);
}

ConditionReport check_conditions(const MeasurementMatrix& a, Index s) {
  ConditionReport report;
  report.coherence = coherence(a);
  report.coherence_ok =
      report.coherence == 0.0
          ? true
          : static_cast<double>(s) < 1.0 / (3.0 * report.coherence);
  try {
    const Index two_s = std::min(2 * s, a.cols());
    report.delta_2s = rip_constant(a, two_s);
    report.rip_ok = *report.delta_2s < std::sqrt(2.0) - 1.0;
  } catch (const TooLarge&) {
    // Exact RIP is not certified at this scale; leave the fields empty.
  }
  return report;
}

namespace {

// Depth-first enumeration of sign vectors, carrying w = P s and
// q = s^T P s so the squared norm ||P s||_2^2 = q is O(1) per leaf.
void sign_dfs(const Matrix& p, Index depth, Vector& w, double q,
              double& best) {
  const Index n = p.rows();
  if (depth == n) {
    best = std::max(best, q);
    return;
  }
  const double wj = w(depth);
  const double pjj = p(depth, depth);
  sign_dfs(p, depth + 1, w, q, best);
  w += p.col(depth);
  sign_dfs(p, depth + 1, w, q + 2.0 * wj + pjj, best);
  w -= 2.0 * p.col(depth);
  sign_dfs(p, depth + 1, w, q - 2.0 * wj + pjj, best);
  w += p.col(depth);
}

}  // namespace

std::pair<double, MaxMode> max_psgn_norm_sq(const ProjectionOperator& p,
                                            unsigned workers) {
  const Index n = p.signal_dim();
  if (n > 16) {
    throw TooLarge("exact sign enumeration is guarded at N <= 16");
  }
  if (workers == 0) workers = default_workers();
  const Matrix dense = p.dense();

  const Index prefix_len = std::min<Index>(n, 4);
  std::size_t task_count = 1;
  for (Index i = 0; i < prefix_len; ++i) task_count *= 3;

  std::vector<double> local(task_count, 0.0);
  parallel_for(task_count, workers, [&](std::size_t task) {
    Vector w = Vector::Zero(n);
    double q = 0.0;
    std::size_t code = task;
    for (Index j = 0; j < prefix_len; ++j) {
      const int trit = static_cast<int>(code % 3);  // 0, +1, -1
      code /= 3;
      if (trit == 0) continue;
      const double sigma = trit == 1 ? 1.0 : -1.0;
      q += 2.0 * sigma * w(j) + dense(j, j);
      w += sigma * dense.col(j);
    }
    double best = q;
    sign_dfs(dense, prefix_len, w, q, best);
    local[task] = best;
  });
  double best = 0.0;
  for (double v : local) best = std::max(best, v);
  return {best, MaxMode::Exact};
}

std::pair<double, MaxMode> max_psgn_norm_sq(const ProjectionOperator& p,
                                            const Sampled& mode) {
  const Index n = p.signal_dim();
  Rng rng(mode.seed);
  Vector s(n);
  double best = 0.0;
  for (std::size_t trial = 0; trial < mode.trials; ++trial) {
    for (Index i = 0; i < n; ++i) s(i) = static_cast<double>(rng.sign_trit());
    best = std::max(best, p.apply(s).squaredNorm());
  }
  return {best, MaxMode::SampledLowerBound};
}

namespace {

std::vector<Index> exact_support(const Vector& x) {
  std::vector<Index> support;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) support.push_back(i);
  }
  return support;
}

// Exact minimum of g along one kernel direction. Between coordinate zero
// crossings the map r -> (||x* + r u||_1 - ||x*||_1) / r is a hyperbola, so
// its extrema over (0, M0] sit at the crossings, at M0, or in the r -> 0
// limit G(u).
double direction_min(const Vector& u, const Vector& x_star,
                     const std::vector<Index>& support, double m0,
                     double x_star_l1) {
  auto phi = [&](double r) {
    return ((x_star + r * u).lpNorm<1>() - x_star_l1) / r;
  };
  double best = oracle::G_value(u, x_star, support);
  best = std::min(best, phi(m0));
  for (Index k = 0; k < u.size(); ++k) {
    if (u(k) == 0.0 || x_star(k) == 0.0) continue;
    const double r = -x_star(k) / u(k);
    if (r > 0.0 && r <= m0) best = std::min(best, phi(r));
  }
  return best;
}

}  // namespace

std::pair<double, TMode> estimate_t(const MeasurementMatrix& a,
                                    const Vector& x_star, double m0) {
  if (x_star.size() != a.cols()) {
    throw DimensionMismatch("minimizer length does not match matrix columns");
  }
  if (!(m0 > 0.0)) throw Error("M0 must be positive");
  const Index dim = a.cols() - a.rows();
  if (dim == 0) {
    throw Degenerate("the solution space is a single point; t is undefined");
  }
  if (dim > 2) {
    throw TooLarge("exact t is available for kernel dimension <= 2");
  }
  const Matrix kernel = kernel_basis(a);
  const auto support = exact_support(x_star);
  const double x_star_l1 = x_star.lpNorm<1>();

  double t = 0.0;
  if (dim == 1) {
    const Vector u = kernel.col(0);
    t = std::min(direction_min(u, x_star, support, m0, x_star_l1),
                 direction_min(-u, x_star, support, m0, x_star_l1));
  } else {
    const auto eval = [&](double theta) {
      const Vector u =
          std::cos(theta) * kernel.col(0) + std::sin(theta) * kernel.col(1);
      return direction_min(u, x_star, support, m0, x_star_l1);
    };
    constexpr int kGrid = 4096;
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    std::vector<double> h(kGrid);
    for (int i = 0; i < kGrid; ++i) h[static_cast<std::size_t>(i)] =
        eval(kTwoPi * i / kGrid);
    t = *std::min_element(h.begin(), h.end());
    // Refine every local grid minimum by repeated dense subsampling; the
    // per-direction minimum is continuous but has kinks, so no unimodality
    // is assumed inside a bracket.
    for (int i = 0; i < kGrid; ++i) {
      const double hi0 = h[static_cast<std::size_t>((i + kGrid - 1) % kGrid)];
      const double hi1 = h[static_cast<std::size_t>(i)];
      const double hi2 = h[static_cast<std::size_t>((i + 1) % kGrid)];
      if (!(hi1 <= hi0 && hi1 <= hi2)) continue;
      double center = kTwoPi * i / kGrid;
      double half_width = kTwoPi / kGrid;
      for (int round = 0; round < 8; ++round) {
        constexpr int kSub = 32;
        double best_theta = center;
        double best_val = eval(center);
        for (int j = -kSub; j <= kSub; ++j) {
          const double theta = center + half_width * j / kSub;
          const double v = eval(theta);
          if (v < best_val) {
            best_val = v;
            best_theta = theta;
          }
        }
        center = best_theta;
        half_width /= kSub / 2;
        t = std::min(t, best_val);
      }
    }
  }
  if (!(t > 0.0)) {
    throw NotMinimizer(
        "g attains a nonpositive value; x_star is not the unique minimizer");
  }
  return {t, TMode::Exact};
}

std::pair<double, TMode> estimate_t(const MeasurementMatrix& a,
                                    const Vector& x_star, double m0,
                                    const Sampled& mode) {
  if (x_star.size() != a.cols()) {
    throw DimensionMismatch("minimizer length does not match matrix columns");
  }
  if (!(m0 > 0.0)) throw Error("M0 must be positive");
  ProjectionOperator p(a);
  Rng rng(mode.seed);
  const Index n = a.cols();
  double best = std::numeric_limits<double>::infinity();
  Vector noise(n);
  for (std::size_t trial = 0; trial < mode.trials; ++trial) {
    Vector u;
    double norm = 0.0;
    do {
      for (Index i = 0; i < n; ++i) noise(i) = rng.normal();
      u = p.apply(noise);
      norm = u.norm();
    } while (norm < 1e-12);
    u /= norm;
    const double r = m0 * (1.0 - rng.uniform01());  // in (0, M0]
    const double g = oracle::g_value(x_star + r * u, x_star);
    if (g <= 0.0) {
      throw NotMinimizer("sampled g <= 0 contradicts uniqueness of x_star");
    }
    best = std::min(best, g);
  }
  return {best, TMode::MonteCarloEstimate};
}

TheoryConstants constants(double t, TMode t_mode, double max_psgn_sq,
                          MaxMode max_mode, double mu, double lambda,
                          double m0, Index n) {
  if (!(mu > 1.0)) throw MuOutOfRange("mu must exceed 1");
  if (!(t > 0.0)) throw Error("t must be positive");
  TheoryConstants tc;
  tc.t = t;
  tc.t_mode = t_mode;
  tc.max_psgn_sq = max_psgn_sq;
  tc.max_mode = max_mode;
  tc.mu = mu;
  tc.K = mu / (2.0 * t) * max_psgn_sq;
  tc.d = (mu - 1.0) * max_psgn_sq;
  tc.lambda = lambda;
  tc.C = 2.0 / t * std::sqrt(static_cast<double>(n) * lambda);
  tc.M0 = m0;
  return tc;
}

std::vector<BoundPoint> bound_sequence(double start_dev, double gamma,
                                       double t, double max_psgn_sq,
                                       const MuMode& mode, std::size_t steps) {
  if (!(start_dev > 0.0)) throw Error("start deviation must be positive");
  if (!(gamma > 0.0)) throw Error("step-size must be positive");
  if (!(t > 0.0)) throw Error("t must be positive");
  if (!(max_psgn_sq > 0.0)) throw Error("max ||P sgn||^2 must be positive");

  std::vector<BoundPoint> out;
  if (std::holds_alternative<ConstMu>(mode)) {
    const double mu = std::get<ConstMu>(mode).mu;
    if (!(mu > 1.0)) throw MuOutOfRange("mu must exceed 1");
    const double k_gamma = mu / (2.0 * t) * max_psgn_sq * gamma;
    if (start_dev < k_gamma) {
      throw MuOutOfRange(
          "mu violates the admissible range at the start deviation "
          "(start_dev < K gamma)");
    }
    const double d = (mu - 1.0) * max_psgn_sq;
    out.push_back({0, start_dev, mu});
    double dev_sq = start_dev * start_dev;
    for (std::size_t iter = 1; iter <= steps; ++iter) {
      dev_sq -= d * gamma * gamma;
      const double dev = std::sqrt(std::max(dev_sq, 0.0));
      if (dev < k_gamma) break;
      out.push_back({iter, dev, mu});
    }
    return out;
  }

  const double denom = gamma * max_psgn_sq;
  double dev = start_dev;
  double mu_n = 2.0 * t * dev / denom;
  out.push_back({0, dev, mu_n});
  if (mu_n <= 1.0) return out;  // already at the truncation boundary
  for (std::size_t iter = 1; iter <= steps; ++iter) {
    const double dev_sq =
        dev * dev - 2.0 * gamma * t * dev + gamma * gamma * max_psgn_sq;
    dev = std::sqrt(std::max(dev_sq, 0.0));
    mu_n = 2.0 * t * dev / denom;
    if (mu_n <= 1.0) break;
    out.push_back({iter, dev, mu_n});
  }
  return out;
}

double rate_bound_lemma2(double k_max, double k_min, double t,
                         double max_psgn_sq) {
  if (!(k_min > max_psgn_sq / (2.0 * t))) {
    throw KMinTooSmall("K_min must exceed max ||P sgn||^2 / (2t)");
  }
  if (k_max < k_min) throw Error("K_max must be at least K_min");
  return 2.0 * (k_max - k_min) / (2.0 * t - max_psgn_sq / k_min);
}

double rate_bound_theorem6(double m0, double gamma, double t,
                           double max_psgn_sq, double k0) {
  if (!(k0 > max_psgn_sq / (2.0 * t))) {
    throw K0TooSmall("K0 must exceed max ||P sgn||^2 / (2t)");
  }
  if (!(m0 > 0.0) || !(gamma > 0.0)) {
    throw Error("M0 and gamma must be positive");
  }
  return m0 / (t * gamma) + k0 / t * std::log(m0 / (k0 * gamma)) +
         2.0 * k0 / (2.0 * t - max_psgn_sq / k0);
}

double compressible_deviation_bound(double p, double magnitude, Index s,
                                    double delta_s, double gamma,
                                    double epsilon, double k, double c_prime) {
  if (!(p > 0.0 && p < 1.0)) throw Error("p must lie in (0, 1)");
  const double c_p = 1.0 / (1.0 / p - 1.0);
  const double d_p = std::pow(2.0 / p - 1.0, -0.5);
  const double tail = c_prime * std::sqrt(1.0 + delta_s) * (d_p + c_p) *
                      magnitude *
                      std::pow(static_cast<double>(s), 0.5 - 1.0 / p);
  return k * gamma + c_prime * epsilon + tail;
}

io::KvPairs constants_kv(const TheoryConstants& tc) {
  io::KvPairs kv;
  kv.emplace_back("t", io::format_float(tc.t));
  kv.emplace_back("t_mode", tc.t_mode == TMode::Exact ? "exact"
                                                      : "monte_carlo_estimate");
  kv.emplace_back("max_psgn_sq", io::format_float(tc.max_psgn_sq));
  kv.emplace_back("max_mode", tc.max_mode == MaxMode::Exact
                                  ? "exact"
                                  : "sampled_lower_bound");
  kv.emplace_back("mu", io::format_float(tc.mu));
  kv.emplace_back("K", io::format_float(tc.K));
  kv.emplace_back("d", io::format_float(tc.d));
  kv.emplace_back("lambda", io::format_float(tc.lambda));
  kv.emplace_back("C", io::format_float(tc.C));
  kv.emplace_back("M0", io::format_float(tc.M0));
  return kv;
}

void write_constants(const std::filesystem::path& path,
                     const TheoryConstants& tc) {
  io::write_kv(path, constants_kv(tc));
}

void write_bound_sequence_csv(const std::filesystem::path& path,
                              const std::vector<BoundPoint>& seq) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "iter,dev,mu_n\n";
  for (const auto& pt : seq) {
    out << pt.iter << "," << io::format_float(pt.dev) << ","
        << io::format_float(pt.mu_n) << "\n";
  }
}

}  // namespace zap::theory
