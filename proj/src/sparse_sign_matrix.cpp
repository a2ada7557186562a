#include "bioproj/sparse_sign_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "bioproj/rng.hpp"

namespace bioproj {
namespace {

void check_shape(std::size_t n_rows, std::size_t n_cols) {
  if (n_rows == 0 || n_cols == 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  if (n_cols > std::numeric_limits<std::uint32_t>::max() ||
      n_rows > std::numeric_limits<std::size_t>::max() / n_cols) {
    throw std::invalid_argument("matrix dimensions overflow the index type");
  }
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("Bernoulli parameter p must lie in (0, 1)");
  }
}

void check_finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("input contains non-finite entries");
  }
}

// Trinomial draw of one row: +1 with prob q/2, -1 with prob q/2, else 0,
// where q = 2p(1-p). Same law as the difference of two Bernoulli(p) draws.
void sample_row(std::size_t n_cols, double half_q, Engine& eng, std::vector<std::uint32_t>& cols,
                std::vector<std::int8_t>& vals) {
  for (std::size_t c = 0; c < n_cols; ++c) {
    const double u = uniform01(eng);
    if (u < half_q) {
      cols.push_back(static_cast<std::uint32_t>(c));
      vals.push_back(1);
    } else if (u < 2.0 * half_q) {
      cols.push_back(static_cast<std::uint32_t>(c));
      vals.push_back(-1);
    }
  }
}

double row_dot(std::span<const std::uint32_t> cols, std::span<const std::int8_t> vals,
               const double* x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (vals[j] > 0) {
      acc += x[cols[j]];
    } else {
      acc -= x[cols[j]];
    }
  }
  return acc;
}

}  // namespace

SparseSignMatrix::SparseSignMatrix(std::size_t n_rows, std::size_t n_cols, double p,
                                   std::uint64_t seed, std::vector<std::size_t> row_ptr,
                                   std::vector<std::uint32_t> cols,
                                   std::vector<std::int8_t> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      p_(p),
      seed_(seed),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      values_(std::move(values)) {
  check_shape(n_rows_, n_cols_);
  check_p(p_);
  if (row_ptr_.size() != n_rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != values_.size() || cols_.size() != values_.size()) {
    throw std::invalid_argument("inconsistent CSR arrays");
  }
  for (std::size_t r = 0; r < n_rows_; ++r) {
    if (row_ptr_[r] > row_ptr_[r + 1]) throw std::invalid_argument("row_ptr not monotone");
    for (std::size_t j = row_ptr_[r]; j < row_ptr_[r + 1]; ++j) {
      if (cols_[j] >= n_cols_) throw std::invalid_argument("column index out of range");
      if (j > row_ptr_[r] && cols_[j] <= cols_[j - 1]) {
        throw std::invalid_argument("column indices must be strictly increasing within a row");
      }
      if (values_[j] != 1 && values_[j] != -1) {
        throw std::invalid_argument("stored values must be -1 or +1");
      }
    }
  }
}

SparseSignMatrix SparseSignMatrix::from_dense(std::size_t n_rows, std::size_t n_cols,
                                              std::span<const int> dense, double p,
                                              std::uint64_t seed) {
  check_shape(n_rows, n_cols);
  if (dense.size() != n_rows * n_cols) throw std::invalid_argument("dense size mismatch");
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<std::int8_t> vals;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      const int v = dense[r * n_cols + c];
      if (v == 0) continue;
      if (v != 1 && v != -1) throw std::invalid_argument("entries must be in {-1, 0, 1}");
      cols.push_back(static_cast<std::uint32_t>(c));
      vals.push_back(static_cast<std::int8_t>(v));
    }
    row_ptr.push_back(vals.size());
  }
  return {n_rows, n_cols, p, seed, std::move(row_ptr), std::move(cols), std::move(vals)};
}

int SparseSignMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= n_rows_ || c >= n_cols_) throw std::out_of_range("matrix index out of range");
  const auto rc = row_cols(r);
  const auto it = std::lower_bound(rc.begin(), rc.end(), static_cast<std::uint32_t>(c));
  if (it == rc.end() || *it != c) return 0;
  return row_values(r)[static_cast<std::size_t>(it - rc.begin())];
}

std::vector<int> SparseSignMatrix::to_dense() const {
  std::vector<int> dense(n_rows_ * n_cols_, 0);
  for (std::size_t r = 0; r < n_rows_; ++r) {
    const auto rc = row_cols(r);
    const auto rv = row_values(r);
    for (std::size_t j = 0; j < rc.size(); ++j) dense[r * n_cols_ + rc[j]] = rv[j];
  }
  return dense;
}

SparseSignMatrix sample_matrix(std::size_t n_rows, std::size_t n_cols, double p,
                               std::uint64_t seed, Exec exec) {
  check_shape(n_rows, n_cols);
  check_p(p);
  const double half_q = p * (1.0 - p);

  std::vector<std::vector<std::uint32_t>> row_cols(n_rows);
  std::vector<std::vector<std::int8_t>> row_vals(n_rows);
  for_each_index(n_rows, exec, [&](std::size_t r) {
    Engine eng = make_engine(seed, stream::kMatrix, r);
    sample_row(n_cols, half_q, eng, row_cols[r], row_vals[r]);
  });

  std::vector<std::size_t> row_ptr(n_rows + 1, 0);
  for (std::size_t r = 0; r < n_rows; ++r) row_ptr[r + 1] = row_ptr[r] + row_vals[r].size();
  std::vector<std::uint32_t> cols(row_ptr.back());
  std::vector<std::int8_t> vals(row_ptr.back());
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::copy(row_cols[r].begin(), row_cols[r].end(), cols.begin() + row_ptr[r]);
    std::copy(row_vals[r].begin(), row_vals[r].end(), vals.begin() + row_ptr[r]);
  }
  return {n_rows, n_cols, p, seed, std::move(row_ptr), std::move(cols), std::move(vals)};
}

std::vector<double> apply(const SparseSignMatrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw std::invalid_argument("apply: dimension mismatch");
  check_finite(x);
  std::vector<double> y(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) y[r] = row_dot(m.row_cols(r), m.row_values(r), x.data());
  return y;
}

std::vector<double> apply_batch(const SparseSignMatrix& m, std::span<const double> x,
                                std::size_t rows, Exec exec) {
  if (x.size() != rows * m.cols()) throw std::invalid_argument("apply_batch: dimension mismatch");
  check_finite(x);
  const std::size_t in = m.cols();
  const std::size_t out = m.rows();
  std::vector<double> y(rows * out);
  for_each_index(rows, exec, [&](std::size_t i) {
    const double* xi = x.data() + i * in;
    double* yi = y.data() + i * out;
    for (std::size_t r = 0; r < out; ++r) yi[r] = row_dot(m.row_cols(r), m.row_values(r), xi);
  });
  return y;
}

EntryStats entry_stats(const SparseSignMatrix& m) {
  EntryStats s;
  s.sample_count = m.rows() * m.cols();
  if (s.sample_count == 0) return s;
  std::int64_t sum = 0;
  for (std::int8_t v : m.values()) sum += v;
  const double total = static_cast<double>(s.sample_count);
  const double stored = static_cast<double>(m.nnz());
  s.zero_fraction = 1.0 - stored / total;
  s.mean = static_cast<double>(sum) / total;
  // Stored values square to one.
  s.variance = std::max(0.0, stored / total - s.mean * s.mean);
  return s;
}

SparseSignMatrix submatrix(const SparseSignMatrix& m, std::span<const std::size_t> row_indices) {
  if (row_indices.empty()) throw std::invalid_argument("submatrix: no rows selected");
  std::vector<bool> seen(m.rows(), false);
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<std::int8_t> vals;
  for (std::size_t r : row_indices) {
    if (r >= m.rows()) throw std::invalid_argument("submatrix: row index out of range");
    if (seen[r]) throw std::invalid_argument("submatrix: duplicate row index");
    seen[r] = true;
    const auto rc = m.row_cols(r);
    const auto rv = m.row_values(r);
    cols.insert(cols.end(), rc.begin(), rc.end());
    vals.insert(vals.end(), rv.begin(), rv.end());
    row_ptr.push_back(vals.size());
  }
  return {row_indices.size(), m.cols(), m.p(), m.seed(), std::move(row_ptr), std::move(cols),
          std::move(vals)};
}

void write_matrix(std::ostream& out, const SparseSignMatrix& m) {
  char pbuf[32];
  std::snprintf(pbuf, sizeof pbuf, "%.17g", m.p());
  out << m.rows() << ' ' << m.cols() << ' ' << pbuf << ' ' << m.seed() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto rc = m.row_cols(r);
    const auto rv = m.row_values(r);
    for (std::size_t j = 0; j < rc.size(); ++j) {
      out << r << ' ' << rc[j] << ' ' << static_cast<int>(rv[j]) << '\n';
    }
  }
}

SparseSignMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("matrix file: missing header");
  std::istringstream header(line);
  std::size_t n = 0, m = 0;
  double p = 0;
  std::uint64_t seed = 0;
  if (!(header >> n >> m >> p >> seed)) {
    throw std::runtime_error("matrix file: malformed header `" + line + "`");
  }
  check_shape(n, m);

  std::vector<std::tuple<std::size_t, std::uint32_t, int>> entries;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t r = 0, c = 0;
    int v = 0;
    if (!(ls >> r >> c >> v) || r >= n || c >= m || (v != 1 && v != -1)) {
      throw std::runtime_error("matrix file: bad entry on line " + std::to_string(lineno));
    }
    entries.emplace_back(r, static_cast<std::uint32_t>(c), v);
  }
  std::sort(entries.begin(), entries.end());
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<std::int8_t> vals;
  for (const auto& [r, c, v] : entries) {
    ++row_ptr[r + 1];
    cols.push_back(c);
    vals.push_back(static_cast<std::int8_t>(v));
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  // Duplicate (row, col) pairs are caught by the strict-increase check.
  return {n, m, p, seed, std::move(row_ptr), std::move(cols), std::move(vals)};
}

}  // namespace bioproj
