#include "bioproj/dense_linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bioproj/rng.hpp"

namespace bioproj {

LogDet log_abs_det(std::span<const double> a_in, std::size_t m) {
  if (a_in.size() != m * m) throw std::invalid_argument("log_abs_det: size mismatch");
  std::vector<double> a(a_in.begin(), a_in.end());
  LogDet out{0.0, 1};
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * m + k]);
    for (std::size_t i = k + 1; i < m; ++i) {
      if (std::abs(a[i * m + k]) > best) {
        best = std::abs(a[i * m + k]);
        piv = i;
      }
    }
    if (best == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (piv != k) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a[k * m + j], a[piv * m + j]);
      out.sign = -out.sign;
    }
    const double d = a[k * m + k];
    if (d < 0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(d));
    for (std::size_t i = k + 1; i < m; ++i) {
      const double f = a[i * m + k] / d;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < m; ++j) a[i * m + j] -= f * a[k * m + j];
    }
  }
  return out;
}

OpNormEstimate operator_norm(const SparseSignMatrix& m, std::uint64_t seed, double rel_tol,
                             std::size_t max_iter) {
  OpNormEstimate est;
  if (m.nnz() == 0) {
    est.converged = true;
    return est;
  }
  Engine eng = make_engine(seed, stream::kVector);
  std::vector<double> v(m.cols());
  for (double& x : v) x = standard_normal(eng);

  const auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    const double n = std::sqrt(s);
    for (double& e : x) e /= n;
    return n;
  };
  normalize(v);

  std::vector<double> w(m.cols());
  double lambda = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const std::vector<double> mv = bioproj::apply(m, v);
    // w = M^T (M v)
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto rc = m.row_cols(r);
      const auto rv = m.row_values(r);
      for (std::size_t j = 0; j < rc.size(); ++j) w[rc[j]] += rv[j] * mv[r];
    }
    double next = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) next += v[i] * w[i];
    est.iterations = it;
    if (next == 0.0) {
      // Start vector fell in the null space; the estimate stays at zero.
      lambda = 0.0;
      break;
    }
    const bool done = it > 1 && std::abs(next - lambda) <= rel_tol * std::abs(next);
    lambda = next;
    normalize(w);
    v.swap(w);
    if (done) {
      est.converged = true;
      break;
    }
  }
  est.norm = std::sqrt(std::max(lambda, 0.0));
  return est;
}

}  // namespace bioproj
