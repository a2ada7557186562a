#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bioproj/sparse_sign_matrix.hpp"

namespace bioproj::mc {

struct McConfig {
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  double p = 0.05;
  double epsilon = 0.5;
  std::vector<std::size_t> m_grid;
  std::vector<std::size_t> n_grid;
  /// 1 selects the serial reference path; 0 uses every available thread.
  int workers = 0;

  void validate() const;
};

/// One grid point of a suite. Fields that do not apply to a suite stay at 0
/// (integers) or NaN (reals).
struct SuiteRecord {
  std::string label;
  std::size_t m = 0;
  std::size_t n = 0;
  double p = std::numeric_limits<double>::quiet_NaN();
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double param = std::numeric_limits<double>::quiet_NaN();
  std::size_t trials = 0;
  std::size_t successes = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  double max_value = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteRecord> records;
  double wall_seconds = 0.0;

  bool all_pass() const;
};

/// sqrt(q(1-q)/trials).
double binomial_std_error(double q, std::size_t trials);

/// Exact P(invertible) for an m x m difference-of-Bernoulli matrix by
/// enumerating all 3^(m^2) sign patterns; m <= 3.
double exact_invertibility_probability(std::size_t m, double p);

/// Empirical entry law of one n x m sample against the closed-form moments
/// (4 standard errors).
SuiteResult entry_distribution(const McConfig& cfg, std::size_t n, std::size_t m);

/// Fraction of exactly invertible m x m samples, for each m in cfg.m_grid.
/// Grid points with m <= 3 are checked against exact enumeration (5 SE).
SuiteResult invertibility_curve(const McConfig& cfg);

/// True when |M(u - v)|^2 / (n sigma^2 |u - v|^2) lies in [1 - eps, 1 + eps],
/// with sigma^2 taken from the matrix's p.
bool jl_preserved(const SparseSignMatrix& mat, std::span<const double> u, std::span<const double> v,
                  double epsilon);

/// Fraction of trials (fresh M and Gaussian pair per trial) whose scaled
/// squared distance lands in [1-eps, 1+eps]; passes when the fraction is at
/// least jl_success_bound minus 3 standard errors. One record per n in
/// cfg.n_grid (or the single n given).
SuiteResult jl_preservation(const McConfig& cfg, std::size_t m, std::size_t n);
SuiteResult jl_preservation(const McConfig& cfg, std::size_t m);

/// Ratio |M|_op / sqrt(n) per n, against the envelope 2 sigma (1 + sqrt(m/n)) + 0.5.
SuiteResult opnorm_scaling(const McConfig& cfg, std::size_t m,
                           const std::vector<std::size_t>& n_grid);

/// Fraction of m x m samples with log|det| >= det_lower_threshold(m, p, eps).
/// Exactly singular samples count as below. No pass threshold.
SuiteResult det_bound_incidence(const McConfig& cfg, std::size_t m, double epsilon);

/// Deterministic check of the capping residual bound for p in {0.5, 1, 1.5}
/// and every k, plus the norm sandwich for q in {0.5, 1, 2, inf}, over
/// cfg.trials random vectors of the given length.
SuiteResult cap_bound_sweep(const McConfig& cfg, std::size_t length);

}  // namespace bioproj::mc
