#include "bioproj/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bioproj/cap.hpp"

namespace bioproj::bounds {
namespace {

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
}

}  // namespace

EntryMoments entry_moments(double p) {
  check_p(p);
  return {0.0, 2.0 * p * p - 2.0 * p + 1.0, 2.0 * p * (1.0 - p)};
}

void BoundSpec::validate() const {
  check_p(p);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (epsilon >= 1.0) throw std::invalid_argument("epsilon must be below 1 (bound degenerates)");
  if (n == 0) throw std::invalid_argument("n must be positive");
}

double jl_success_bound(const BoundSpec& spec) {
  spec.validate();
  const double e = spec.epsilon;
  const double gap = e * e - e * e * e;
  const double n = static_cast<double>(spec.n);
  const double upper_tail = std::exp(-gap * n / 4.0);
  const double lower_tail = std::exp(-gap * n / (2.0 * (1.0 / spec.sigma2() + 1.0)));
  return std::clamp(1.0 - upper_tail - lower_tail, 0.0, 1.0);
}

double det_lower_threshold(std::size_t m, double p, double epsilon) {
  check_p(p);
  if (m == 0) throw std::invalid_argument("m must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  const double md = static_cast<double>(m);
  return 0.5 * md * std::log(2.0 * p * (1.0 - p)) + 0.5 * std::lgamma(md + 1.0) -
         std::pow(md, 0.5 + epsilon);
}

double capped_residual_bound(double norm_p, std::size_t k, double p_norm) {
  return cap_error_bound(norm_p, k, p_norm);
}

}  // namespace bioproj::bounds
