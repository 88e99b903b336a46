#pragma once

#include <vector>

#include "zap/linalg.hpp"

namespace zap::oracle {

// Certified reference solution from exhaustive support enumeration.
struct OracleSolution {
  Vector x;
  double objective = 0.0;  // l0 count or l1 norm
  bool unique = true;
};

// Minimum support size x with A x = y, by enumerating supports in increasing
// size. `unique` is false when another support of equal size also fits.
// Guard: N <= 14.
OracleSolution sparsest_solution(const MeasurementMatrix& a, const Vector& y);

// Minimum l1-norm solution of A x = y over all basic solutions (supports of
// size exactly M, which is where the optimum of an l1 objective over an
// affine space is attained). `unique` is false when another candidate lies
// within 1e-8 of the optimum with a different support/sign pattern.
// Guards: N <= 12, M < N.
OracleSolution l1_min_solution(const MeasurementMatrix& a, const Vector& y);

// (||x||_1 - ||x*||_1) / ||x - x*||_2.
double g_value(const Vector& x, const Vector& x_star);

// Limit of g along a unit direction u below the first sign-change radius:
// G(u) = u_I^T sgn(x*) + ||u_{I^c}||_1 for support set I of x*.
double G_value(const Vector& u, const Vector& x_star,
               const std::vector<Index>& support);

}  // namespace zap::oracle
