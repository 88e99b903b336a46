#pragma once

#include <stdexcept>
#include <string>

namespace zap {

// Base class for all numerical failures raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The measurement matrix is rank deficient (rows not linearly independent),
// so the Gram matrix of the rows is not invertible.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidSparsity : public Error {
 public:
  using Error::Error;
};

class ZeroSignal : public Error {
 public:
  using Error::Error;
};

class ZeroColumn : public Error {
 public:
  using Error::Error;
};

// Warm start supplied to the solver lies outside the solution space.
class InitOutOfSolutionSpace : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration guard tripped; the exact computation is not
// available at this problem size.
class TooLarge : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class Degenerate : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A sampled objective value contradicts uniqueness of the supplied minimizer.
class NotMinimizer : public Error {
 public:
  using Error::Error;
};

class MuOutOfRange : public Error {
 public:
  using Error::Error;
};

class KMinTooSmall : public Error {
 public:
  using Error::Error;
};

class K0TooSmall : public Error {
 public:
  using Error::Error;
};

}  // namespace zap
