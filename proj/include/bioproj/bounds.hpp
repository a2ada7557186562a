#pragma once

#include <cstddef>

namespace bioproj::bounds {

struct EntryMoments {
  double mean = 0.0;
  double zero_prob = 1.0;
  double variance = 0.0;
};

/// Moments of a single difference-of-Bernoulli(p) entry.
EntryMoments entry_moments(double p);

/// Inputs to the distance-preservation bound. sigma2 is the entry variance
/// 2p(1-p); l2 = 1/sigma2 and b = sigma2 are the sub-Gaussian and fourth-moment
/// constants used when rescaling to unit-variance entries.
struct BoundSpec {
  double epsilon = 0.5;
  std::size_t n = 1;
  std::size_t m = 1;
  double p = 0.05;

  double sigma2() const { return 2.0 * p * (1.0 - p); }
  double l2() const { return 1.0 / sigma2(); }
  double b() const { return sigma2(); }
  void validate() const;
};

/// Lower bound on P[(1-eps)|u-v|^2 <= |Mu-Mv|^2/(n sigma2) <= (1+eps)|u-v|^2],
///   1 - exp(-(eps^2-eps^3) n/4) - exp(-(eps^2-eps^3) n / (2(1/sigma2 + 1))),
/// clamped at zero. Requires 0 < eps < 1.
double jl_success_bound(const BoundSpec& spec);

/// log of (2p(1-p))^(m/2) sqrt(m!) exp(-m^(1/2+eps)), the determinant scale
/// an m x m submatrix exceeds with probability 1 - o(1).
double det_lower_threshold(std::size_t m, double p, double epsilon);

/// Same quantity as cap_error_bound; exposed next to the other evaluators.
double capped_residual_bound(double norm_p, std::size_t k, double p_norm);

}  // namespace bioproj::bounds
