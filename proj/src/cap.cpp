#include "bioproj/cap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bioproj {
namespace {

void check_finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("cap: non-finite entry");
  }
}

// Indices of the k winners under the order (|x| desc, index asc), ascending.
std::vector<std::size_t> select_top(std::span<const double> x, std::size_t k) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k >= x.size()) return idx;
  if (k == 0) return {};
  const auto before = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(x[a]);
    const double mb = std::abs(x[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k - 1), idx.end(),
                   before);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

CapResult cap(std::span<const double> x, std::size_t k) {
  check_finite(x);
  CapResult out;
  out.kept_indices = select_top(x, k);
  out.vector.assign(x.size(), 0.0);
  for (std::size_t i : out.kept_indices) out.vector[i] = x[i];
  return out;
}

void cap_in_place(std::span<double> x, std::size_t k) {
  if (k >= x.size()) {
    check_finite(x);
    return;
  }
  CapResult r = cap(x, k);
  std::copy(r.vector.begin(), r.vector.end(), x.begin());
}

double cap_error_bound(double norm_p_of_x, std::size_t k, double p_norm) {
  if (!(p_norm > 0.0 && p_norm < 2.0)) {
    throw std::invalid_argument("cap_error_bound: p must lie in (0, 2)");
  }
  if (!(norm_p_of_x >= 0.0) || !std::isfinite(norm_p_of_x)) {
    throw std::invalid_argument("cap_error_bound: norm must be finite and non-negative");
  }
  return norm_p_of_x * std::pow(static_cast<double>(k) + 1.0, 0.5 - 1.0 / p_norm);
}

double lp_norm(std::span<const double> x, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("lp_norm: q must be positive");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  if (q == 2.0) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  if (q == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), q);
  return std::pow(s, 1.0 / q);
}

}  // namespace bioproj
