#include "zap/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "zap/rng.hpp"

namespace zap {

const Vector& truth_values(const TruthSignal& truth) {
  return std::visit([](const auto& s) -> const Vector& { return s.values; },
                    truth);
}

RecoveryProblem::RecoveryProblem(MeasurementMatrix a_in, Vector y_in,
                                 std::optional<TruthSignal> truth_in,
                                 double epsilon_in)
    : a(std::move(a_in)),
      y(std::move(y_in)),
      truth(std::move(truth_in)),
      epsilon(epsilon_in) {
  if (y.size() != a.rows()) {
    throw DimensionMismatch("observation length " + std::to_string(y.size()) +
                            " does not match " + std::to_string(a.rows()) +
                            " matrix rows");
  }
  if (epsilon < 0.0) throw Error("noise energy bound must be nonnegative");
  if (truth) {
    const Vector& x = truth_values(*truth);
    if (x.size() != a.cols()) {
      throw DimensionMismatch("truth length does not match matrix columns");
    }
    const double residual = (y - a.entries() * x).norm();
    const double limit =
        epsilon == 0.0 ? 1e-10 : epsilon * (1.0 + 1e-9) + 1e-15;
    if (residual > limit) {
      throw Error("ground truth is inconsistent with the observation "
                  "(residual " +
                  io::format_float(residual) + ", bound " +
                  io::format_float(limit) + ")");
    }
  }
}

MeasurementMatrix gen_gaussian_matrix(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || m > n) {
    throw DimensionMismatch("need 1 <= M <= N, got M=" + std::to_string(m) +
                            " N=" + std::to_string(n));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::uint64_t attempt_seed = seed;
  for (int attempt = 0;; ++attempt) {
    Rng rng(attempt_seed);
    Matrix a(m, n);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) a(i, j) = scale * rng.normal();
    }
    try {
      return MeasurementMatrix(std::move(a));
    } catch (const RankDeficient&) {
      if (attempt >= 3) throw;
      attempt_seed = derive_seed(attempt_seed, 0xA11);
    }
  }
}

SparseSignal gen_sparse_signal(Index n, Index s, std::uint64_t seed) {
  if (s < 1 || s > n) {
    throw InvalidSparsity("need 1 <= S <= N, got S=" + std::to_string(s) +
                          " N=" + std::to_string(n));
  }
  Rng rng(seed);
  std::vector<Index> indices(static_cast<std::size_t>(n));
  std::iota(indices.begin(), indices.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const auto j =
        i + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(indices[static_cast<std::size_t>(i)],
              indices[static_cast<std::size_t>(j)]);
  }
  SparseSignal sig;
  sig.support.assign(indices.begin(), indices.begin() + s);
  std::sort(sig.support.begin(), sig.support.end());
  sig.values = Vector::Zero(n);
  double norm_sq = 0.0;
  do {
    for (Index k : sig.support) {
      const double v = rng.normal();
      sig.values(k) = v;
      norm_sq += v * v;
    }
  } while (norm_sq == 0.0);
  sig.values /= std::sqrt(norm_sq);
  return sig;
}

CompressibleSignal gen_compressible_signal(Index n, double p, double magnitude,
                                           std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error("decay exponent p must lie in (0, 1)");
  }
  if (!(magnitude > 0.0)) throw Error("magnitude R must be positive");
  if (n < 1) throw DimensionMismatch("signal length must be positive");
  Rng rng(seed);
  std::vector<double> magnitudes(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    magnitudes[static_cast<std::size_t>(i)] =
        magnitude * std::pow(static_cast<double>(i + 1), -1.0 / p);
  }
  std::vector<int> signs(static_cast<std::size_t>(n));
  for (auto& b : signs) b = rng.sign_bit();
  std::vector<Index> positions(static_cast<std::size_t>(n));
  std::iota(positions.begin(), positions.end(), Index{0});
  for (Index i = 0; i + 1 < n; ++i) {
    const auto j =
        i + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(positions[static_cast<std::size_t>(i)],
              positions[static_cast<std::size_t>(j)]);
  }
  CompressibleSignal sig;
  sig.p = p;
  sig.magnitude = magnitude;
  sig.values = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    sig.values(positions[static_cast<std::size_t>(i)]) =
        signs[static_cast<std::size_t>(i)] * magnitudes[static_cast<std::size_t>(i)];
  }
  return sig;
}

NoisyObservation add_noise(const Vector& y, double target_snr_db,
                           std::uint64_t seed) {
  const double y_norm = y.norm();
  if (y_norm == 0.0) throw ZeroSignal("cannot add noise to a zero observation");
  if (std::isinf(target_snr_db) && target_snr_db > 0.0) {
    return {y, 0.0};
  }
  Rng rng(seed);
  Vector e(y.size());
  double e_norm = 0.0;
  do {
    for (Index i = 0; i < e.size(); ++i) e(i) = rng.normal();
    e_norm = e.norm();
  } while (e_norm == 0.0);
  const double target_norm = y_norm * std::pow(10.0, -target_snr_db / 20.0);
  e *= target_norm / e_norm;
  return {y + e, e.norm()};
}

BestSApprox best_s_approx(const Vector& x, Index s) {
  const Index n = x.size();
  if (s < 1 || s > n) {
    throw InvalidSparsity("need 1 <= S <= N, got S=" + std::to_string(s));
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&x](Index i, Index j) {
    const double ai = std::abs(x(i));
    const double aj = std::abs(x(j));
    if (ai != aj) return ai > aj;
    return i < j;
  });
  BestSApprox out;
  out.x_s = Vector::Zero(n);
  for (Index k = 0; k < s; ++k) {
    const Index i = order[static_cast<std::size_t>(k)];
    out.x_s(i) = x(i);
  }
  const Vector tail = x - out.x_s;
  out.tail_l1 = tail.lpNorm<1>();
  out.tail_l2 = tail.norm();
  return out;
}

void save_problem(const std::filesystem::path& dir, const RecoveryProblem& p,
                  const io::KvPairs& extra_meta) {
  std::filesystem::create_directories(dir);
  io::write_matrix_csv(dir / "A.csv", p.a.entries());
  io::write_vector_csv(dir / "y.csv", p.y);
  io::KvPairs meta;
  if (p.truth) {
    io::write_vector_csv(dir / "truth.csv", truth_values(*p.truth));
    if (std::holds_alternative<SparseSignal>(*p.truth)) {
      meta.emplace_back("kind", "sparse");
      meta.emplace_back(
          "S", std::to_string(std::get<SparseSignal>(*p.truth).sparsity()));
    } else {
      const auto& c = std::get<CompressibleSignal>(*p.truth);
      meta.emplace_back("kind", "compressible");
      meta.emplace_back("p", io::format_float(c.p));
      meta.emplace_back("R", io::format_float(c.magnitude));
    }
  }
  meta.emplace_back("epsilon", io::format_float(p.epsilon));
  for (const auto& kv : extra_meta) meta.push_back(kv);
  io::write_kv(dir / "meta", meta);
}

RecoveryProblem load_problem(const std::filesystem::path& dir) {
  MeasurementMatrix a(io::read_matrix_csv(dir / "A.csv"));
  Vector y = io::read_vector_csv(dir / "y.csv");
  std::map<std::string, std::string> meta;
  if (std::filesystem::exists(dir / "meta")) meta = io::read_kv(dir / "meta");
  double epsilon = 0.0;
  if (auto it = meta.find("epsilon"); it != meta.end()) {
    epsilon = std::stod(it->second);
  }
  std::optional<TruthSignal> truth;
  if (std::filesystem::exists(dir / "truth.csv")) {
    Vector x = io::read_vector_csv(dir / "truth.csv");
    const auto kind = meta.count("kind") ? meta.at("kind") : "sparse";
    if (kind == "compressible") {
      CompressibleSignal c;
      c.values = std::move(x);
      c.p = std::stod(meta.at("p"));
      c.magnitude = std::stod(meta.at("R"));
      truth = c;
    } else {
      SparseSignal s;
      for (Index i = 0; i < x.size(); ++i) {
        if (x(i) != 0.0) s.support.push_back(i);
      }
      s.values = std::move(x);
      truth = s;
    }
  }
  return RecoveryProblem(std::move(a), std::move(y), std::move(truth), epsilon);
}

}  // namespace zap
