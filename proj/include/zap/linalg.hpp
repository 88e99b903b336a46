#pragma once

#include <Eigen/Dense>

#include "zap/errors.hpp"

namespace zap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative singular value threshold below which a measurement matrix is
// rejected as rank deficient rather than regularized.
inline constexpr double kRankTol = 1e-10;

// Dense M x N measurement matrix with linearly independent rows, M <= N.
// Row independence is verified at construction, so every operator derived
// from an instance can assume an invertible row Gram matrix.
class MeasurementMatrix {
 public:
  explicit MeasurementMatrix(Matrix entries);

  Index rows() const { return a_.rows(); }
  Index cols() const { return a_.cols(); }
  const Matrix& entries() const { return a_; }

  double sigma_max() const { return sigma_max_; }
  double sigma_min() const { return sigma_min_; }

 private:
  Matrix a_;
  double sigma_max_ = 0.0;
  double sigma_min_ = 0.0;
};

// Orthogonal projector onto the kernel of A, applied through an orthonormal
// basis Q of the row space (QR of A^T) instead of an explicit Gram inverse:
//   P v = v - Q (Q^T v).
// The same factorization gives the pseudo-inverse, A^+ y = Q R^-T y.
class ProjectionOperator {
 public:
  explicit ProjectionOperator(const MeasurementMatrix& a);

  Index signal_dim() const { return q_.rows(); }
  Index measure_dim() const { return q_.cols(); }
  const MeasurementMatrix& source() const { return source_; }

  Vector apply(const Vector& v) const;

  // Orthonormal basis of the row space of A, N x M.
  const Matrix& row_basis() const { return q_; }

  // Minimum l2-norm preimage A^+ r of a measurement-space vector r.
  Vector pinv_apply(const Vector& r) const;

  // Explicit N x N realization, intended for exhaustive sign enumerations at
  // small N; memory scales as N^2.
  Matrix dense() const;

 private:
  MeasurementMatrix source_;
  Matrix q_;  // N x M, orthonormal columns spanning the row space of A
  Matrix r_;  // M x M upper triangular factor of A^T = Q R
};

ProjectionOperator build_projection(const MeasurementMatrix& a);

// Minimum l2-norm solution of A x = y.
Vector least_squares_point(const MeasurementMatrix& a, const Vector& y);

// Largest eigenvalue of (A A^T)^-1, i.e. 1 / sigma_min(A)^2.
double max_eig_gram_inverse(const MeasurementMatrix& a);

// Orthonormal basis of the kernel of A, N x (N - M).
Matrix kernel_basis(const MeasurementMatrix& a);

}  // namespace zap
