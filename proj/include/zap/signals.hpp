#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

#include "zap/io.hpp"
#include "zap/linalg.hpp"

namespace zap {

// Exactly S-sparse signal with unit energy.
struct SparseSignal {
  Vector values;                // length N, unit l2 norm
  std::vector<Index> support;   // sorted, size S

  Index sparsity() const { return static_cast<Index>(support.size()); }
};

// Signal whose i-th largest magnitude equals R * i^(-1/p) exactly. The decay
// profile is deterministic; only signs and positions are drawn from the seed,
// which makes the tail-norm bounds tight and checkable.
struct CompressibleSignal {
  Vector values;
  double p = 0.5;
  double magnitude = 1.0;  // R
};

using TruthSignal = std::variant<SparseSignal, CompressibleSignal>;

const Vector& truth_values(const TruthSignal& truth);

struct RecoveryProblem {
  RecoveryProblem(MeasurementMatrix a_in, Vector y_in,
                  std::optional<TruthSignal> truth_in = std::nullopt,
                  double epsilon_in = 0.0);

  MeasurementMatrix a;
  Vector y;
  std::optional<TruthSignal> truth;
  double epsilon = 0.0;  // noise energy bound
};

// Entries i.i.d. normal(0, 1/M), reproducible per seed. Rank deficiency is
// retried with a derived seed at most 3 times before failing.
MeasurementMatrix gen_gaussian_matrix(Index m, Index n, std::uint64_t seed);

// Support uniform without replacement, nonzeros standard normal, then the
// whole vector is scaled to unit l2 norm.
SparseSignal gen_sparse_signal(Index n, Index s, std::uint64_t seed);

CompressibleSignal gen_compressible_signal(Index n, double p, double magnitude,
                                           std::uint64_t seed);

struct NoisyObservation {
  Vector y;
  double epsilon = 0.0;  // realized noise l2 norm
};

// Gaussian noise scaled so the measurement SNR hits target_snr_db exactly.
// A +infinity target is the noiseless passthrough sentinel.
NoisyObservation add_noise(const Vector& y, double target_snr_db,
                           std::uint64_t seed);

struct BestSApprox {
  Vector x_s;
  double tail_l1 = 0.0;
  double tail_l2 = 0.0;
};

// Keeps the S largest-magnitude entries (ties broken by lower index).
BestSApprox best_s_approx(const Vector& x, Index s);

// Problem directory layout: A.csv, y.csv, truth.csv (optional) and a `meta`
// file of key=value lines (seed, S or (p, R), epsilon, snr_db).
void save_problem(const std::filesystem::path& dir, const RecoveryProblem& p,
                  const io::KvPairs& extra_meta = {});
RecoveryProblem load_problem(const std::filesystem::path& dir);

}  // namespace zap
