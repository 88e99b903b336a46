#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "zap/io.hpp"
#include "zap/linalg.hpp"

namespace zap::theory {

enum class TMode { Exact, MonteCarloEstimate };
enum class MaxMode { Exact, SampledLowerBound };

// Constants of the convergence analysis for one problem instance:
//   K = (mu / 2t) * max ||P sgn(x)||_2^2      (radius factor)
//   d = (mu - 1)  * max ||P sgn(x)||_2^2      (guaranteed squared decrease)
//   C = (2 / t) * sqrt(N * lambda)            (noise amplification)
// with t the l1-vs-l2 lower bound over the solution space and lambda the
// largest eigenvalue of (A A^T)^-1.
struct TheoryConstants {
  double t = 0.0;
  TMode t_mode = TMode::Exact;
  double max_psgn_sq = 0.0;
  MaxMode max_mode = MaxMode::Exact;
  double mu = 2.0;
  double K = 0.0;
  double d = 0.0;
  double lambda = 0.0;
  double C = 0.0;
  double M0 = 0.0;
};

struct ConditionReport {
  std::optional<double> delta_2s;  // exact RIP constant, desk scale only
  double coherence = 0.0;
  std::optional<bool> rip_ok;      // delta_2S < sqrt(2) - 1
  bool coherence_ok = false;       // S < 1 / (3 coherence)
};

// Exact RIP constant by exhaustive subset enumeration; guarded at
// binomial(N, S) <= 1e6 subsets.
double rip_constant(const MeasurementMatrix& a, Index s);

// Maximum absolute inner product between distinct unit-normalized columns.
double coherence(const MeasurementMatrix& a);

ConditionReport check_conditions(const MeasurementMatrix& a, Index s);

struct Sampled {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
};

// Exact maximum of ||P s||_2^2 over all sign vectors s in {-1,0,1}^N,
// guarded at N <= 16 (3^N enumeration over a dense realization of P).
std::pair<double, MaxMode> max_psgn_norm_sq(const ProjectionOperator& p,
                                            unsigned workers = 0);
// Sampled variant: a lower bound of the maximum, labeled as such.
std::pair<double, MaxMode> max_psgn_norm_sq(const ProjectionOperator& p,
                                            const Sampled& mode);

// Infimum of g(x) = (||x||_1 - ||x*||_1) / ||x - x*||_2 over solution-space
// points with 0 < ||x - x*||_2 <= M0. Exact mode parametrizes the kernel
// sphere (dimension N - M <= 2) and minimizes exactly over the radius per
// direction (the objective is piecewise hyperbolic in r with breakpoints at
// coordinate zero crossings). x_star must be the unique l1 minimizer.
std::pair<double, TMode> estimate_t(const MeasurementMatrix& a,
                                    const Vector& x_star, double m0);
// Sampled variant: the minimum over random (direction, radius) pairs, an
// upper-bound estimate of t.
std::pair<double, TMode> estimate_t(const MeasurementMatrix& a,
                                    const Vector& x_star, double m0,
                                    const Sampled& mode);

TheoryConstants constants(double t, TMode t_mode, double max_psgn_sq,
                          MaxMode max_mode, double mu, double lambda,
                          double m0, Index n);

struct BoundPoint {
  std::size_t iter = 0;
  double dev = 0.0;
  double mu_n = 0.0;
};

struct ConstMu {
  double mu = 2.0;
};
struct AdaptiveMu {};
using MuMode = std::variant<ConstMu, AdaptiveMu>;

// Deviation sequence dominating the actual iterate deviation.
// Const(mu):  dev_{n+1}^2 = dev_n^2 - d gamma^2, truncated at K gamma.
// Adaptive:   dev_{n+1}^2 = dev_n^2 - 2 gamma t dev_n + gamma^2 max_psgn_sq,
//             with mu_n = 2 t dev_n / (gamma max_psgn_sq), truncated once
//             mu_n <= 1.
std::vector<BoundPoint> bound_sequence(double start_dev, double gamma,
                                       double t, double max_psgn_sq,
                                       const MuMode& mode, std::size_t steps);

// Most steps needed to travel from the (K_max gamma)-ball to the
// (K_min gamma)-ball: 2 (K_max - K_min) / (2t - max_psgn_sq / K_min).
double rate_bound_lemma2(double k_max, double k_min, double t,
                         double max_psgn_sq);

// Most steps needed to enter the (K0 gamma)-ball from deviation M0:
// M0/(t gamma) + (K0/t) ln(M0/(K0 gamma)) + 2 K0 / (2t - max_psgn_sq / K0).
double rate_bound_theorem6(double m0, double gamma, double t,
                           double max_psgn_sq, double k0);

// Reconstruction deviation bound for a p-compressible signal:
// K gamma + C' eps + C' sqrt(1 + delta_S) (D_p + C_p) R S^(1/2 - 1/p),
// with C_p = (1/p - 1)^-1 and D_p = (2/p - 1)^(-1/2). C' is supplied by the
// caller (C + the external sparse-approximation constant).
double compressible_deviation_bound(double p, double magnitude, Index s,
                                    double delta_s, double gamma,
                                    double epsilon, double k, double c_prime);

// Key=value serialization of the constants block.
io::KvPairs constants_kv(const TheoryConstants& tc);
void write_constants(const std::filesystem::path& path,
                     const TheoryConstants& tc);
void write_bound_sequence_csv(const std::filesystem::path& path,
                              const std::vector<BoundPoint>& seq);

}  // namespace zap::theory
