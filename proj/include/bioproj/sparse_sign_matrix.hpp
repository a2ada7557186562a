#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bioproj/parallel.hpp"

namespace bioproj {

/// Random {-1, 0, +1} projection matrix stored in compressed sparse row form.
///
/// Each entry is distributed as X - Y with X, Y ~ Bernoulli(p) independent,
/// i.e. +1 and -1 each with probability p(1-p) and 0 otherwise. Zeros are not
/// stored; within a row column indices are strictly increasing.
class SparseSignMatrix {
 public:
  SparseSignMatrix() = default;

  /// Build from raw CSR arrays. Validates every structural invariant.
  SparseSignMatrix(std::size_t n_rows, std::size_t n_cols, double p, std::uint64_t seed,
                   std::vector<std::size_t> row_ptr, std::vector<std::uint32_t> cols,
                   std::vector<std::int8_t> values);

  /// Build from a dense row-major array of {-1,0,1} values.
  static SparseSignMatrix from_dense(std::size_t n_rows, std::size_t n_cols,
                                     std::span<const int> dense, double p = 0.5,
                                     std::uint64_t seed = 0);

  std::size_t rows() const noexcept { return n_rows_; }
  std::size_t cols() const noexcept { return n_cols_; }
  double p() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t r) const {
    return {cols_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const std::int8_t> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::uint32_t>& col_indices() const noexcept { return cols_; }
  const std::vector<std::int8_t>& values() const noexcept { return values_; }

  /// Entry (r, c) as an integer in {-1, 0, 1}.
  int at(std::size_t r, std::size_t c) const;

  /// Dense row-major copy; intended for small matrices and test oracles.
  std::vector<int> to_dense() const;

  bool operator==(const SparseSignMatrix&) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  double p_ = 0.5;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<std::int8_t> values_;
};

struct EntryStats {
  double zero_fraction = 1.0;
  double mean = 0.0;
  double variance = 0.0;
  std::size_t sample_count = 0;
};

/// Sample an n_rows x n_cols difference-of-Bernoulli matrix. Row i draws from
/// a stream derived from (seed, i), so the result is identical for every
/// execution policy and thread count.
SparseSignMatrix sample_matrix(std::size_t n_rows, std::size_t n_cols, double p,
                               std::uint64_t seed, Exec exec = Exec::parallel);

/// y = M x, accumulated in double precision.
std::vector<double> apply(const SparseSignMatrix& m, std::span<const double> x);

/// Y = X M^T for row-major X (rows x m.cols()); returns rows x m.rows().
std::vector<double> apply_batch(const SparseSignMatrix& m, std::span<const double> x,
                                std::size_t rows, Exec exec = Exec::parallel);

EntryStats entry_stats(const SparseSignMatrix& m);

/// Rows `row_indices` of m, in the given order. Indices must be distinct.
SparseSignMatrix submatrix(const SparseSignMatrix& m, std::span<const std::size_t> row_indices);

/// Text dump: header `n m p seed`, then `row col value` per stored entry.
void write_matrix(std::ostream& out, const SparseSignMatrix& m);
SparseSignMatrix read_matrix(std::istream& in);

}  // namespace bioproj
