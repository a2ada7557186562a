#include "bioproj/mc_verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "bioproj/bounds.hpp"
#include "bioproj/cap.hpp"
#include "bioproj/dense_linalg.hpp"
#include "bioproj/exact_rank.hpp"
#include "bioproj/parallel.hpp"
#include "bioproj/rng.hpp"
#include "bioproj/sparse_sign_matrix.hpp"

namespace bioproj::mc {
namespace {

// Per-suite stream tags; a trial's randomness depends on (seed, tag, grid
// value, trial index) only.
constexpr std::uint64_t kTagInvert = 1;
constexpr std::uint64_t kTagJl = 2;
constexpr std::uint64_t kTagOpNorm = 3;
constexpr std::uint64_t kTagDet = 4;
constexpr std::uint64_t kTagCap = 5;
constexpr std::uint64_t kTagEntries = 6;

// Floating-point slack for inequalities that can hold with equality.
constexpr double kRoundingSlack = 1e-12;

using Clock = std::chrono::steady_clock;

Exec exec_of(const McConfig& cfg) { return cfg.workers == 1 ? Exec::serial : Exec::parallel; }

void check_grid(const std::vector<std::size_t>& grid, const char* name) {
  if (grid.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == 0) throw std::invalid_argument(std::string(name) + " grid values must be positive");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
    }
  }
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Count successes of an indicator over independent trials. Counts are
// integers, so the reduction is order-independent.
std::size_t count_trials(std::size_t trials, Exec exec, int workers,
                         const std::function<bool(std::size_t)>& trial) {
  std::vector<unsigned char> hit(trials, 0);
  for_each_index(
      trials, exec, [&](std::size_t t) { hit[t] = trial(t) ? 1 : 0; }, workers);
  return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
}

SuiteRecord proportion_record(std::string label, std::size_t successes, std::size_t trials) {
  SuiteRecord r;
  r.label = std::move(label);
  r.trials = trials;
  r.successes = successes;
  r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  r.std_error = binomial_std_error(r.estimate, trials);
  return r;
}

long long det_small(const std::vector<int>& a, std::size_t m) {
  if (m == 1) return a[0];
  if (m == 2) return static_cast<long long>(a[0]) * a[3] - static_cast<long long>(a[1]) * a[2];
  return static_cast<long long>(a[0]) * (a[4] * a[8] - a[5] * a[7]) -
         static_cast<long long>(a[1]) * (a[3] * a[8] - a[5] * a[6]) +
         static_cast<long long>(a[2]) * (a[3] * a[7] - a[4] * a[6]);
}

}  // namespace

void McConfig::validate() const {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
  if (workers < 0) throw std::invalid_argument("workers must be non-negative");
}

bool SuiteResult::all_pass() const {
  return std::all_of(records.begin(), records.end(), [](const SuiteRecord& r) { return r.pass; });
}

double binomial_std_error(double q, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("binomial_std_error: zero trials");
  return std::sqrt(std::max(0.0, q * (1.0 - q)) / static_cast<double>(trials));
}

double exact_invertibility_probability(std::size_t m, double p) {
  if (m == 0 || m > 3) throw std::invalid_argument("exact enumeration supports 1 <= m <= 3");
  const auto law = bounds::entry_moments(p);
  const double w_sign = law.variance / 2.0;
  const std::size_t cells = m * m;
  std::size_t patterns = 1;
  for (std::size_t i = 0; i < cells; ++i) patterns *= 3;
  double total = 0.0;
  std::vector<int> a(cells);
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t c = code;
    double w = 1.0;
    for (std::size_t i = 0; i < cells; ++i) {
      a[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
      w *= a[i] == 0 ? law.zero_prob : w_sign;
    }
    if (det_small(a, m) != 0) total += w;
  }
  return total;
}

SuiteResult entry_distribution(const McConfig& cfg, std::size_t n, std::size_t m) {
  cfg.validate();
  const auto t0 = Clock::now();
  const SparseSignMatrix mat =
      sample_matrix(n, m, cfg.p, derive_seed(cfg.seed, kTagEntries), exec_of(cfg));
  const EntryStats stats = entry_stats(mat);
  const auto law = bounds::entry_moments(cfg.p);
  const double count = static_cast<double>(stats.sample_count);
  // Both the zero indicator and m_ij^2 are Bernoulli, with the same spread.
  const double se = std::sqrt(law.zero_prob * (1.0 - law.zero_prob) / count);
  const double se_mean = std::sqrt(law.variance / count);

  SuiteResult out{"entries", {}, 0.0};
  const auto add = [&](const char* label, double estimate, double expected, double stderr_) {
    SuiteRecord r;
    r.label = label;
    r.m = m;
    r.n = n;
    r.p = cfg.p;
    r.trials = stats.sample_count;
    r.estimate = estimate;
    r.std_error = stderr_;
    r.bound = expected;
    r.pass = std::abs(estimate - expected) <= 4.0 * stderr_;
    out.records.push_back(r);
  };
  add("zero_fraction", stats.zero_fraction, law.zero_prob, se);
  add("variance", stats.variance, law.variance, se);
  add("mean", stats.mean, 0.0, se_mean);
  out.wall_seconds = seconds_since(t0);
  return out;
}

SuiteResult invertibility_curve(const McConfig& cfg) {
  cfg.validate();
  check_grid(cfg.m_grid, "m");
  const auto t0 = Clock::now();
  SuiteResult out{"invertibility", {}, 0.0};
  for (std::size_t m : cfg.m_grid) {
    const std::size_t hits = count_trials(cfg.trials, exec_of(cfg), cfg.workers, [&](std::size_t t) {
      const auto mat =
          sample_matrix(m, m, cfg.p, derive_seed(cfg.seed, kTagInvert, m, t), Exec::serial);
      return exact::is_invertible(mat).invertible;
    });
    SuiteRecord r = proportion_record("invertible_fraction", hits, cfg.trials);
    r.m = m;
    r.p = cfg.p;
    if (m <= 3) {
      r.bound = exact_invertibility_probability(m, cfg.p);
      const double se = binomial_std_error(r.bound, cfg.trials);
      r.pass = std::abs(r.estimate - r.bound) <= 5.0 * se;
    }
    out.records.push_back(r);
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

bool jl_preserved(const SparseSignMatrix& mat, std::span<const double> u, std::span<const double> v,
                  double epsilon) {
  if (u.size() != mat.cols() || v.size() != mat.cols()) {
    throw std::invalid_argument("jl_preserved: dimension mismatch");
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dist2 += (u[i] - v[i]) * (u[i] - v[i]);
  if (dist2 == 0.0) throw std::invalid_argument("jl_preserved: u equals v");
  const auto mu = bioproj::apply(mat, u);
  const auto mv = bioproj::apply(mat, v);
  double proj2 = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) proj2 += (mu[i] - mv[i]) * (mu[i] - mv[i]);
  const double sigma2 = bounds::entry_moments(mat.p()).variance;
  const double ratio = proj2 / (static_cast<double>(mat.rows()) * sigma2 * dist2);
  return ratio >= 1.0 - epsilon && ratio <= 1.0 + epsilon;
}

SuiteResult jl_preservation(const McConfig& cfg, std::size_t m, std::size_t n) {
  cfg.validate();
  if (m == 0 || n == 0) throw std::invalid_argument("jl_preservation: dimensions must be positive");
  bounds::BoundSpec spec{cfg.epsilon, n, m, cfg.p};
  const double bound = bounds::jl_success_bound(spec);
  const double eps = cfg.epsilon;
  const auto t0 = Clock::now();

  const std::size_t hits = count_trials(cfg.trials, exec_of(cfg), cfg.workers, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, kTagJl, n, m, t);
    const auto mat = sample_matrix(n, m, cfg.p, trial_seed, Exec::serial);
    Engine eng = make_engine(trial_seed, stream::kVector);
    std::vector<double> u(m), v(m);
    double dist2 = 0.0;
    while (dist2 == 0.0) {
      for (std::size_t i = 0; i < m; ++i) {
        u[i] = standard_normal(eng);
        v[i] = standard_normal(eng);
      }
      dist2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) dist2 += (u[i] - v[i]) * (u[i] - v[i]);
    }
    return jl_preserved(mat, u, v, eps);
  });

  SuiteResult out{"jl", {}, 0.0};
  SuiteRecord r = proportion_record("preserved_fraction", hits, cfg.trials);
  r.m = m;
  r.n = n;
  r.p = cfg.p;
  r.epsilon = eps;
  r.bound = bound;
  r.pass = r.estimate >= bound - 3.0 * r.std_error;
  out.records.push_back(r);
  out.wall_seconds = seconds_since(t0);
  return out;
}

SuiteResult jl_preservation(const McConfig& cfg, std::size_t m) {
  check_grid(cfg.n_grid, "n");
  const auto t0 = Clock::now();
  SuiteResult out{"jl", {}, 0.0};
  for (std::size_t n : cfg.n_grid) {
    auto one = jl_preservation(cfg, m, n);
    out.records.push_back(one.records.front());
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

SuiteResult opnorm_scaling(const McConfig& cfg, std::size_t m, const std::vector<std::size_t>& n_grid) {
  cfg.validate();
  check_grid(n_grid, "n");
  if (m == 0) throw std::invalid_argument("opnorm_scaling: m must be positive");
  const double sigma = std::sqrt(bounds::entry_moments(cfg.p).variance);
  const auto t0 = Clock::now();
  SuiteResult out{"opnorm", {}, 0.0};
  for (std::size_t n : n_grid) {
    std::vector<double> ratio(cfg.trials);
    std::vector<unsigned char> converged(cfg.trials);
    for_each_index(
        cfg.trials, exec_of(cfg),
        [&](std::size_t t) {
          const std::uint64_t trial_seed = derive_seed(cfg.seed, kTagOpNorm, n, m, t);
          const auto mat = sample_matrix(n, m, cfg.p, trial_seed, Exec::serial);
          const auto est = operator_norm(mat, trial_seed);
          ratio[t] = est.norm / std::sqrt(static_cast<double>(n));
          converged[t] = est.converged ? 1 : 0;
        },
        cfg.workers);
    const double envelope =
        2.0 * sigma * (1.0 + std::sqrt(static_cast<double>(m) / static_cast<double>(n))) + 0.5;
    // Fixed-order float reductions.
    double sum = 0.0;
    for (double x : ratio) sum += x;
    const double mean = sum / static_cast<double>(cfg.trials);
    double ss = 0.0;
    for (double x : ratio) ss += (x - mean) * (x - mean);
    const double sd = cfg.trials > 1 ? std::sqrt(ss / static_cast<double>(cfg.trials - 1)) : 0.0;

    SuiteRecord r;
    r.label = "opnorm_over_sqrt_n";
    r.m = m;
    r.n = n;
    r.p = cfg.p;
    r.trials = cfg.trials;
    r.successes = static_cast<std::size_t>(std::count(converged.begin(), converged.end(), 1));
    r.estimate = mean;
    r.std_error = sd / std::sqrt(static_cast<double>(cfg.trials));
    r.bound = envelope;
    r.max_value = *std::max_element(ratio.begin(), ratio.end());
    r.pass = r.max_value <= envelope;
    out.records.push_back(r);
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

SuiteResult det_bound_incidence(const McConfig& cfg, std::size_t m, double epsilon) {
  cfg.validate();
  if (m < 2) throw std::invalid_argument("det_bound_incidence: m must be at least 2");
  const double threshold = bounds::det_lower_threshold(m, cfg.p, epsilon);
  const auto t0 = Clock::now();
  const std::size_t hits = count_trials(cfg.trials, exec_of(cfg), cfg.workers, [&](std::size_t t) {
    const auto mat = sample_matrix(m, m, cfg.p, derive_seed(cfg.seed, kTagDet, m, t), Exec::serial);
    if (!exact::is_invertible(mat).invertible) return false;
    const auto dense = mat.to_dense();
    const std::vector<double> a(dense.begin(), dense.end());
    const LogDet ld = log_abs_det(a, m);
    return !ld.singular() && ld.log_abs >= threshold;
  });
  SuiteResult out{"det", {}, 0.0};
  SuiteRecord r = proportion_record("above_threshold_fraction", hits, cfg.trials);
  r.m = m;
  r.p = cfg.p;
  r.epsilon = epsilon;
  r.bound = threshold;
  out.records.push_back(r);
  out.wall_seconds = seconds_since(t0);
  return out;
}

SuiteResult cap_bound_sweep(const McConfig& cfg, std::size_t length) {
  cfg.validate();
  if (length == 0) throw std::invalid_argument("cap_bound_sweep: length must be positive");
  const std::vector<double> error_ps{0.5, 1.0, 1.5};
  const std::vector<double> sandwich_qs{0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()};
  const std::size_t checks = error_ps.size() + sandwich_qs.size();
  const auto t0 = Clock::now();

  // violations[t * checks + c]
  std::vector<std::size_t> violations(cfg.trials * checks, 0);
  for_each_index(
      cfg.trials, exec_of(cfg),
      [&](std::size_t t) {
        Engine eng = make_engine(cfg.seed, kTagCap, length, t);
        std::vector<double> x(length);
        if (t % 2 == 0) {
          for (double& v : x) v = standard_normal(eng);
        } else {
          // Sparse Laplace-like: about 10% nonzero, exponential magnitude, random sign.
          for (double& v : x) {
            if (uniform01(eng) < 0.1) {
              const double mag = -std::log(1.0 - uniform01(eng));
              v = uniform01(eng) < 0.5 ? -mag : mag;
            }
          }
        }
        std::vector<double> mags(length);
        for (std::size_t i = 0; i < length; ++i) mags[i] = std::abs(x[i]);
        std::sort(mags.begin(), mags.end(), std::greater<>());

        // tail2[k] = sum of squares of entries ranked k..end (those cap(x,k) drops).
        std::vector<double> tail2(length + 1, 0.0);
        for (std::size_t i = length; i-- > 0;) tail2[i] = tail2[i + 1] + mags[i] * mags[i];

        // Spot-check the actual operator at doubling k against the ranked tail.
        std::vector<std::size_t> probe_k{0};
        for (std::size_t k = 1; k < length; k *= 2) probe_k.push_back(k);
        probe_k.push_back(length);

        for (std::size_t c = 0; c < error_ps.size(); ++c) {
          const double pn = error_ps[c];
          double s = 0.0;
          for (std::size_t i = length; i-- > 0;) s += std::pow(mags[i], pn);
          const double norm_p = std::pow(s, 1.0 / pn);
          std::size_t bad = 0;
          for (std::size_t k = 0; k <= length; ++k) {
            const double residual = std::sqrt(tail2[k]);
            const double bound = cap_error_bound(norm_p, k, pn);
            if (residual > bound * (1.0 + kRoundingSlack)) ++bad;
          }
          for (std::size_t k : probe_k) {
            const auto capped = cap(x, k);
            double r2 = 0.0;
            for (std::size_t i = 0; i < length; ++i) {
              const double d = x[i] - capped.vector[i];
              r2 += d * d;
            }
            if (std::sqrt(r2) > cap_error_bound(norm_p, k, pn) * (1.0 + kRoundingSlack)) ++bad;
          }
          violations[t * checks + c] = bad;
        }

        const double linf = mags.front();
        for (std::size_t c = 0; c < sandwich_qs.size(); ++c) {
          const double q = sandwich_qs[c];
          std::size_t bad = 0;
          if (std::isinf(q)) {
            // The capped vector keeps the largest entry for every k >= 1.
            for (std::size_t k : probe_k) {
              if (k == 0) continue;
              const double nq = lp_norm(cap(x, k).vector, q);
              if (nq < linf || nq > linf) ++bad;
            }
          } else {
            std::vector<double> head(length + 1, 0.0);
            for (std::size_t i = 0; i < length; ++i) head[i + 1] = head[i] + std::pow(mags[i], q);
            const double full = std::pow(head[length], 1.0 / q);
            for (std::size_t k = 1; k <= length; ++k) {
              const double nq = std::pow(head[k], 1.0 / q);
              if (nq < linf * (1.0 - kRoundingSlack) || nq > full * (1.0 + kRoundingSlack)) ++bad;
            }
          }
          violations[t * checks + error_ps.size() + c] = bad;
        }
      },
      cfg.workers);

  SuiteResult out{"cap", {}, 0.0};
  const auto add = [&](const std::string& label, double param, std::size_t c, std::size_t per_vector) {
    std::size_t bad = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) bad += violations[t * checks + c];
    SuiteRecord r;
    r.label = label;
    r.n = length;
    r.param = param;
    r.trials = cfg.trials;
    r.successes = cfg.trials * per_vector - bad;
    r.estimate = static_cast<double>(bad);
    r.std_error = 0.0;
    r.bound = 0.0;
    r.pass = bad == 0;
    out.records.push_back(r);
  };
  std::size_t probes = 1;
  for (std::size_t k = 1; k < length; k *= 2) ++probes;
  ++probes;
  for (std::size_t c = 0; c < error_ps.size(); ++c) {
    add("residual_bound_violations", error_ps[c], c, length + 1 + probes);
  }
  for (std::size_t c = 0; c < sandwich_qs.size(); ++c) {
    const bool inf = std::isinf(sandwich_qs[c]);
    add("sandwich_violations", sandwich_qs[c], error_ps.size() + c, inf ? probes - 1 : length);
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

}  // namespace bioproj::mc
