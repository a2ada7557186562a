#include "bioproj/exact_rank.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bioproj::exact {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct MersenneField {
  static constexpr u64 p = kMersenne61;
  static u64 mul(u64 a, u64 b) {
    const u128 t = static_cast<u128>(a) * b;
    u64 r = (static_cast<u64>(t) & p) + static_cast<u64>(t >> 61);
    if (r >= p) r -= p;
    return r;
  }
};

struct GenericField {
  u64 p;
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
};

template <typename Field>
u64 pow_mod(const Field& f, u64 base, u64 e) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = f.mul(r, base);
    base = f.mul(base, base);
    e >>= 1;
  }
  return r;
}

template <typename Field>
std::size_t rank_in_field(const Field& f, u64 p, std::vector<u64>& a, std::size_t rows,
                          std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank) {
      for (std::size_t j = c; j < cols; ++j) std::swap(a[piv * cols + j], a[rank * cols + j]);
    }
    u64* prow = &a[rank * cols];
    const u64 inv = pow_mod(f, prow[c], p - 2);
    for (std::size_t j = c; j < cols; ++j) prow[j] = f.mul(prow[j], inv);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      u64* row = &a[i * cols];
      const u64 factor = row[c];
      if (factor == 0) continue;
      const u64 neg = p - factor;
      for (std::size_t j = c; j < cols; ++j) {
        if (prow[j] == 0) continue;
        u64 v = row[j] + f.mul(neg, prow[j]);
        if (v >= p) v -= p;
        row[j] = v;
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<u64> reduce(std::span<const int> dense, u64 p) {
  std::vector<u64> a(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    const long long v = dense[i] % static_cast<long long>(p);
    a[i] = static_cast<u64>(v < 0 ? v + static_cast<long long>(p) : v);
  }
  return a;
}

}  // namespace

std::size_t rank_mod_prime(std::span<const int> dense, std::size_t rows, std::size_t cols,
                           std::uint64_t prime) {
  if (dense.size() != rows * cols) throw std::invalid_argument("rank_mod_prime: size mismatch");
  if (prime < 2 || prime > kMersenne61) throw std::invalid_argument("rank_mod_prime: bad modulus");
  std::vector<u64> a = reduce(dense, prime);
  if (prime == kMersenne61) return rank_in_field(MersenneField{}, prime, a, rows, cols);
  return rank_in_field(GenericField{prime}, prime, a, rows, cols);
}

bool nonzero_determinant_bareiss(std::span<const int> dense, std::size_t m) {
  using boost::multiprecision::cpp_int;
  if (dense.size() != m * m) throw std::invalid_argument("bareiss: size mismatch");
  std::vector<cpp_int> a(dense.begin(), dense.end());
  cpp_int prev = 1;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    while (piv < m && a[piv * m + k] == 0) ++piv;
    if (piv == m) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a[piv * m + j], a[k * m + j]);
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      for (std::size_t j = k + 1; j < m; ++j) {
        a[i * m + j] = (a[i * m + j] * a[k * m + k] - a[i * m + k] * a[k * m + j]) / prev;
      }
      a[i * m + k] = 0;
    }
    prev = a[k * m + k];
  }
  return a[m * m - 1] != 0;
}

InvertibilityVerdict is_invertible(const SparseSignMatrix& square) {
  const std::size_t m = square.rows();
  if (square.cols() != m) throw std::invalid_argument("is_invertible: matrix is not square");
  std::vector<bool> col_used(m, false);
  for (std::size_t r = 0; r < m; ++r) {
    if (square.row_cols(r).empty()) return {false, false};
    for (auto c : square.row_cols(r)) col_used[c] = true;
  }
  for (bool used : col_used) {
    if (!used) return {false, false};
  }
  const std::vector<int> dense = square.to_dense();
  if (rank_mod_prime(dense, m, m, kMersenne61) == m) return {true, false};
  const bool full_b = rank_mod_prime(dense, m, m, kPrime61b) == m;
  if (!full_b) return {false, false};
  return {nonzero_determinant_bareiss(dense, m), true};
}

}  // namespace bioproj::exact
