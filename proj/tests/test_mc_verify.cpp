#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "bioproj/bounds.hpp"
#include "bioproj/mc_verify.hpp"
#include "bioproj/report_io.hpp"
#include "test_support.hpp"

using namespace bioproj;

namespace {

std::int64_t det_small(const std::vector<int>& a, std::size_t m) {
  if (m == 1) return a[0];
  if (m == 2) return static_cast<std::int64_t>(a[0]) * a[3] - static_cast<std::int64_t>(a[1]) * a[2];
  return static_cast<std::int64_t>(a[0]) * (a[4] * a[8] - a[5] * a[7]) -
         static_cast<std::int64_t>(a[1]) * (a[3] * a[8] - a[5] * a[6]) +
         static_cast<std::int64_t>(a[2]) * (a[3] * a[7] - a[4] * a[6]);
}

// Walks all 3^(m*m) sign matrices with their probabilities.
template <typename F>
void enumerate(std::size_t m, double p, F&& visit) {
  const double q_sign = p * (1 - p);
  const double q_zero = 1 - 2 * q_sign;
  const std::size_t cells = m * m;
  std::size_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= 3;
  std::vector<int> a(cells);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double w = 1.0;
    for (std::size_t i = 0; i < cells; ++i) {
      a[i] = static_cast<int>(c % 3) - 1;
      w *= a[i] == 0 ? q_zero : q_sign;
      c /= 3;
    }
    visit(a, w);
  }
}

double enumerated_invertibility(std::size_t m, double p) {
  double prob = 0.0;
  enumerate(m, p, [&](const std::vector<int>& a, double w) {
    if (det_small(a, m) != 0) prob += w;
  });
  return prob;
}

mc::McConfig small_config(std::size_t trials) {
  mc::McConfig cfg;
  cfg.trials = trials;
  return cfg;
}

}  // namespace

TEST_CASE("exact invertibility probabilities") {
  // Values from rational arithmetic.
  CHECK(mc::exact_invertibility_probability(2, 0.05) == doctest::Approx(0.0179278240625).epsilon(1e-12));
  CHECK(mc::exact_invertibility_probability(2, 0.1) == doctest::Approx(0.06322536).epsilon(1e-12));
  CHECK(mc::exact_invertibility_probability(2, 0.3) == doctest::Approx(0.30612456).epsilon(1e-12));
  CHECK(mc::exact_invertibility_probability(2, 0.5) == doctest::Approx(0.40625).epsilon(1e-12));
  CHECK(mc::exact_invertibility_probability(3, 0.05) == doctest::Approx(0.005036062132765336).epsilon(1e-12));
  CHECK(mc::exact_invertibility_probability(3, 0.5) == doctest::Approx(0.4072265625).epsilon(1e-12));
  for (double p : {0.05, 0.2, 0.5, 0.8}) {
    CHECK(mc::exact_invertibility_probability(1, p) == doctest::Approx(2 * p * (1 - p)));
    CHECK(mc::exact_invertibility_probability(2, p) == doctest::Approx(enumerated_invertibility(2, p)));
    CHECK(mc::exact_invertibility_probability(3, p) == doctest::Approx(enumerated_invertibility(3, p)));
  }
  CHECK_THROWS_AS(mc::exact_invertibility_probability(4, 0.5), std::invalid_argument);
}

TEST_CASE("invertibility curve at small m matches enumeration") {
  auto cfg = small_config(20000);
  cfg.p = 0.5;
  cfg.m_grid = {1, 2, 3};
  const auto r = mc::invertibility_curve(cfg);
  REQUIRE(r.records.size() == 3);
  for (const auto& rec : r.records) {
    const double truth = rec.m == 1 ? 0.5 : enumerated_invertibility(rec.m, 0.5);
    CHECK(std::abs(rec.estimate - truth) <= 5 * mc::binomial_std_error(truth, cfg.trials));
    CHECK(rec.pass);
    CHECK(rec.successes == static_cast<std::size_t>(std::llround(rec.estimate * cfg.trials)));
  }
  CHECK(r.all_pass());
}

TEST_CASE("m = 1 fraction is 2p(1-p)") {
  auto cfg = small_config(10000);
  cfg.m_grid = {1};
  const auto r = mc::invertibility_curve(cfg);
  CHECK(std::abs(r.records[0].estimate - 0.095) <= 5 * mc::binomial_std_error(0.095, 10000));
}

TEST_CASE("suites are identical under serial and parallel execution") {
  auto cfg = small_config(300);
  cfg.m_grid = {2, 10, 25};
  auto serial = cfg;
  serial.workers = 1;
  CHECK(suite_to_csv(mc::invertibility_curve(cfg)) == suite_to_csv(mc::invertibility_curve(serial)));
  CHECK(suite_to_csv(mc::jl_preservation(cfg, 20, 300)) == suite_to_csv(mc::jl_preservation(serial, 20, 300)));
  const std::vector<std::size_t> ns{100, 200};
  CHECK(suite_to_csv(mc::opnorm_scaling(cfg, 20, ns)) == suite_to_csv(mc::opnorm_scaling(serial, 20, ns)));
  CHECK(suite_to_csv(mc::cap_bound_sweep(cfg, 64)) == suite_to_csv(mc::cap_bound_sweep(serial, 64)));
}

TEST_CASE("entry distribution suite") {
  const auto r = mc::entry_distribution(small_config(1), 2000, 433);
  CHECK(r.all_pass());
  CHECK(r.records.size() == 3);
  CHECK(r.records[0].label == "zero_fraction");
  CHECK(r.records[0].bound == doctest::Approx(0.905));
}

TEST_CASE("jl preservation indicator") {
  const auto mat = sample_matrix(500, 30, 0.1, 3);
  const auto u = testing::random_vector(30, 1);
  const auto v = testing::random_vector(30, 2);
  const bool base = mc::jl_preserved(mat, u, v, 0.3);
  for (double alpha : {1e-3, 0.5, 7.0, 1e4}) {
    std::vector<double> su(u), sv(v);
    for (double& e : su) e *= alpha;
    for (double& e : sv) e *= alpha;
    CHECK(mc::jl_preserved(mat, su, sv, 0.3) == base);
  }
  CHECK_THROWS_AS(mc::jl_preserved(mat, u, u, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(mc::jl_preserved(mat, std::vector<double>(3, 1.0), v, 0.3), std::invalid_argument);
}

TEST_CASE("jl suite passes and reports its bound") {
  auto cfg = small_config(200);
  cfg.n_grid = {500, 2000};
  const auto r = mc::jl_preservation(cfg, 50);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[1].bound == doctest::Approx(bounds::jl_success_bound({0.5, 2000, 50, 0.05})));
  CHECK(r.all_pass());

  cfg.epsilon = 0.999;
  const auto near_one = mc::jl_preservation(cfg, 50, 2000);
  CHECK(near_one.records[0].bound == 0.0);
  CHECK(near_one.records[0].pass);

  cfg.epsilon = 1.0;
  CHECK_THROWS(mc::jl_preservation(cfg, 50, 2000));
}

TEST_CASE("operator norm seeded regression") {
  auto cfg = small_config(50);
  const std::vector<std::size_t> ns{2000};
  const auto r = mc::opnorm_scaling(cfg, 100, ns);
  const auto& rec = r.records[0];
  CHECK(rec.successes == 50);
  // First run at seed 42, recorded.
  CHECK(rec.estimate == doctest::Approx(0.37759413056665098).epsilon(1e-9));
  const double sigma = std::sqrt(0.095);
  CHECK(std::abs(rec.estimate - sigma * (1 + std::sqrt(100.0 / 2000.0))) < 0.02);
  CHECK(rec.pass);
}

TEST_CASE("operator norm ratio stays bounded as n grows") {
  auto cfg = small_config(20);
  const std::vector<std::size_t> ns{250, 500, 1000, 2000};
  const auto r = mc::opnorm_scaling(cfg, 60, ns);
  REQUIRE(r.records.size() == 4);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    CHECK(r.records[i].estimate < r.records[i - 1].estimate);
  }
  CHECK(r.all_pass());
}

TEST_CASE("determinant-bound incidence matches enumeration at m = 2") {
  for (double eps : {0.1, 0.5}) {
    const double threshold = bounds::det_lower_threshold(2, 0.5, eps);
    double truth = 0.0;
    enumerate(2, 0.5, [&](const std::vector<int>& a, double w) {
      const auto d = det_small(a, 2);
      if (d != 0 && std::log(std::abs(static_cast<double>(d))) >= threshold) truth += w;
    });
    auto cfg = small_config(20000);
    cfg.p = 0.5;
    const auto r = mc::det_bound_incidence(cfg, 2, eps);
    CHECK(std::abs(r.records[0].estimate - truth) <= 5 * mc::binomial_std_error(truth, cfg.trials));
    CHECK(r.records[0].bound == doctest::Approx(threshold));
  }
}

TEST_CASE("determinant-bound incidence is seeded") {
  auto cfg = small_config(100);
  cfg.p = 0.3;
  cfg.epsilon = 0.1;
  const auto a = mc::det_bound_incidence(cfg, 16, 0.1);
  const auto b = mc::det_bound_incidence(cfg, 16, 0.1);
  CHECK(suite_to_csv(a) == suite_to_csv(b));
}

TEST_CASE("cap bound sweep finds no violations") {
  const auto r = mc::cap_bound_sweep(small_config(100), 300);
  REQUIRE(r.records.size() == 7);
  // Checks per vector. Residual: every k in 0..300 against the ranked tail, plus the operator
  // itself at k = 0, 1, 2, 4, ..., 256, 300 (11 probes). Finite-q sandwich: k = 1..300.
  // Infinity-norm sandwich: the probes except k = 0.
  const std::vector<std::size_t> per_vector{301 + 11, 301 + 11, 301 + 11, 300, 300, 300, 10};
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    CAPTURE(i);
    CHECK(rec.estimate == 0.0);  // violation count
    CHECK(rec.successes == 100 * per_vector[i]);
    CHECK(rec.pass);
  }
}

TEST_CASE("config validation") {
  auto cfg = small_config(0);
  cfg.m_grid = {2};
  CHECK_THROWS_AS(mc::invertibility_curve(cfg), std::invalid_argument);
  cfg.trials = 10;
  cfg.p = 1.2;
  CHECK_THROWS_AS(mc::invertibility_curve(cfg), std::invalid_argument);
  cfg.p = 0.5;
  cfg.m_grid = {};
  CHECK_THROWS_AS(mc::invertibility_curve(cfg), std::invalid_argument);
  cfg.m_grid = {0};
  CHECK_THROWS_AS(mc::invertibility_curve(cfg), std::invalid_argument);
}

TEST_CASE("binomial standard error") {
  CHECK(mc::binomial_std_error(0.5, 100) == doctest::Approx(0.05));
  CHECK(mc::binomial_std_error(0.0, 100) == 0.0);
}

TEST_CASE("suite CSV and JSON") {
  auto cfg = small_config(50);
  cfg.m_grid = {2};
  const auto r = mc::invertibility_curve(cfg);
  const auto csv = suite_to_csv(r, " bioproj verify invertibility (seed=42)");
  CHECK(csv.rfind("# bioproj verify invertibility (seed=42)\n", 0) == 0);
  CHECK(csv.find("suite,label,m,n,p,epsilon,param,trials,successes,estimate,stderr,bound,max_value,pass\n") !=
        std::string::npos);
  const auto js = suite_to_json(r, cfg, "bioproj verify invertibility (seed=42)");
  CHECK(js["suite"] == "invertibility");
  CHECK(js["records"].size() == 1);
  CHECK(js["records"][0]["max_value"].is_null());
  CHECK(js["all_pass"] == true);
  CHECK(js.find("wall_seconds") == js.end());
}

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}
