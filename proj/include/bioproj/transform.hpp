#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bioproj/parallel.hpp"
#include "bioproj/row_matrix.hpp"
#include "bioproj/sparse_sign_matrix.hpp"

namespace bioproj {

struct TransformConfig {
  std::size_t input_dim = 0;    // m
  std::size_t output_dim = 0;   // n
  double bernoulli_p = 0.05;
  std::size_t cap_k = 0;        // k <= n; k == n disables capping
  std::uint64_t seed = 42;

  void validate() const;

  /// Flat `key=value` block with keys m, n, p, k, seed (one per line).
  std::string to_text() const;
  static TransformConfig from_text(const std::string& text);

  bool operator==(const TransformConfig&) const = default;
};

/// The expand-then-cap transform s -> cap(M s, k).
class Transform {
 public:
  explicit Transform(const TransformConfig& config, Exec exec = Exec::parallel);
  Transform(const TransformConfig& config, SparseSignMatrix matrix);

  const TransformConfig& config() const noexcept { return config_; }
  const SparseSignMatrix& matrix() const noexcept { return matrix_; }

  std::vector<double> forward(std::span<const double> s) const;

  /// Row-wise forward over a batch; row order preserved.
  RowMatrix forward_batch(const RowMatrix& batch, Exec exec = Exec::parallel) const;
  /// Same, for a list of vectors; ragged input is rejected.
  std::vector<std::vector<double>> forward_batch(const std::vector<std::vector<double>>& batch,
                                                 Exec exec = Exec::parallel) const;

 private:
  TransformConfig config_;
  SparseSignMatrix matrix_;
};

inline Transform build(const TransformConfig& config) { return Transform(config); }

}  // namespace bioproj
