#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "bioproj/sparse_sign_matrix.hpp"

namespace bioproj::exact {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;  // 2^61 - 1
inline constexpr std::uint64_t kPrime61b = 2305843009213693921ULL;            // next prime below

/// Rank of an integer matrix reduced modulo `prime` (row-major, rows x cols).
/// A nonzero-rank deficit mod p may be spurious; full rank mod p is a proof.
std::size_t rank_mod_prime(std::span<const int> dense, std::size_t rows, std::size_t cols,
                           std::uint64_t prime);

/// Exact determinant sign test over the integers by fraction-free (Bareiss)
/// elimination on arbitrary-precision integers. Returns true when det != 0.
bool nonzero_determinant_bareiss(std::span<const int> dense, std::size_t m);

struct InvertibilityVerdict {
  bool invertible = false;
  bool escalated = false;  // the two primes disagreed and Bareiss decided
};

/// Exact invertibility of a square {-1,0,1} matrix. Zero rows/columns are
/// rejected outright; otherwise the matrix is eliminated mod 2^61-1, a
/// singular verdict is re-checked mod a second prime, and a disagreement is
/// settled by exact big-integer elimination.
InvertibilityVerdict is_invertible(const SparseSignMatrix& square);

}  // namespace bioproj::exact
