#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bioproj {

struct CapResult {
  std::vector<double> vector;
  std::vector<std::size_t> kept_indices;  // ascending
};

/// Keep the k largest-magnitude entries of x and zero the rest.
///
/// Ties in magnitude go to the lower index. k >= x.size() is the identity.
/// Runs an expected-linear selection rather than a full sort.
CapResult cap(std::span<const double> x, std::size_t k);

/// In-place variant used by the batch kernels; returns nothing extra.
void cap_in_place(std::span<double> x, std::size_t k);

/// ||x||_p (k+1)^(1/2 - 1/p): upper bound on ||x - cap(x, k)||_2 for p in (0, 2).
double cap_error_bound(double norm_p_of_x, std::size_t k, double p_norm);

/// l_q (quasi-)norm for q > 0; q = +inf gives the max norm.
double lp_norm(std::span<const double> x, double q);

}  // namespace bioproj
