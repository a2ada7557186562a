#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "bioproj/sparse_sign_matrix.hpp"

namespace bioproj {

struct LogDet {
  double log_abs = 0.0;  // -inf when a zero pivot is met
  int sign = 0;
  bool singular() const { return sign == 0; }
};

/// log|det| by LU with partial pivoting, accumulated in the log domain.
LogDet log_abs_det(std::span<const double> a, std::size_t m);

struct OpNormEstimate {
  double norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Largest singular value of M by power iteration on M^T M, started from a
/// seeded Gaussian vector. Stops when the Rayleigh quotient changes by less
/// than rel_tol (relative) or after max_iter steps.
OpNormEstimate operator_norm(const SparseSignMatrix& m, std::uint64_t seed, double rel_tol = 1e-6,
                             std::size_t max_iter = 1000);

}  // namespace bioproj
