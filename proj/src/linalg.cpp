#include "zap/linalg.hpp"

#include <utility>

namespace zap {

MeasurementMatrix::MeasurementMatrix(Matrix entries) : a_(std::move(entries)) {
  if (a_.rows() < 1 || a_.cols() < 1) {
    throw DimensionMismatch("measurement matrix must be nonempty");
  }
  if (a_.rows() > a_.cols()) {
    throw DimensionMismatch("measurement matrix needs rows <= cols, got " +
                            std::to_string(a_.rows()) + " x " +
                            std::to_string(a_.cols()));
  }
  Eigen::BDCSVD<Matrix> svd(a_);
  const auto& sv = svd.singularValues();
  sigma_max_ = sv(0);
  sigma_min_ = sv(sv.size() - 1);
  if (!(sigma_min_ > kRankTol * sigma_max_)) {
    throw RankDeficient("rows of the measurement matrix are not linearly "
                        "independent (sigma_min/sigma_max = " +
                        std::to_string(sigma_max_ > 0 ? sigma_min_ / sigma_max_
                                                      : 0.0) +
                        ")");
  }
}

ProjectionOperator::ProjectionOperator(const MeasurementMatrix& a)
    : source_(a) {
  const Index m = a.rows();
  const Index n = a.cols();
  Eigen::HouseholderQR<Matrix> qr(a.entries().transpose());
  q_ = qr.householderQ() * Matrix::Identity(n, m);
  r_ = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
}

Vector ProjectionOperator::apply(const Vector& v) const {
  if (v.size() != q_.rows()) {
    throw DimensionMismatch("projection input has length " +
                            std::to_string(v.size()) + ", expected " +
                            std::to_string(q_.rows()));
  }
  return v - q_ * (q_.transpose() * v);
}

Vector ProjectionOperator::pinv_apply(const Vector& r) const {
  if (r.size() != q_.cols()) {
    throw DimensionMismatch("pseudo-inverse input has length " +
                            std::to_string(r.size()) + ", expected " +
                            std::to_string(q_.cols()));
  }
  // A^T = Q R implies A^+ = Q R^-T.
  Vector z = r_.transpose().triangularView<Eigen::Lower>().solve(r);
  return q_ * z;
}

Matrix ProjectionOperator::dense() const {
  const Index n = q_.rows();
  return Matrix::Identity(n, n) - q_ * q_.transpose();
}

ProjectionOperator build_projection(const MeasurementMatrix& a) {
  return ProjectionOperator(a);
}

Vector least_squares_point(const MeasurementMatrix& a, const Vector& y) {
  if (y.size() != a.rows()) {
    throw DimensionMismatch("observation has length " +
                            std::to_string(y.size()) + ", expected " +
                            std::to_string(a.rows()));
  }
  Eigen::HouseholderQR<Matrix> qr(a.entries().transpose());
  const Index m = a.rows();
  const Index n = a.cols();
  Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  Vector z = r.transpose().triangularView<Eigen::Lower>().solve(y);
  return qr.householderQ() * Matrix::Identity(n, m) * z;
}

double max_eig_gram_inverse(const MeasurementMatrix& a) {
  const double s = a.sigma_min();
  return 1.0 / (s * s);
}

Matrix kernel_basis(const MeasurementMatrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  Eigen::HouseholderQR<Matrix> qr(a.entries().transpose());
  Matrix qfull = qr.householderQ() * Matrix::Identity(n, n);
  return qfull.rightCols(n - m);
}

}  // namespace zap
