#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bioproj/dataset.hpp"
#include "test_support.hpp"

using namespace bioproj;

namespace {

std::string expect_error(const std::string& path) {
  try {
    load_csv(path);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("load_csv basics") {
  const auto dir = testing::scratch_dir("dataset_load");
  testing::spit(dir / "a.csv", "# comment\n0,1.5,2,3\n\n1,-4,5e-1,6\n");
  const auto d = load_csv((dir / "a.csv").string());
  CHECK(d.size() == 2);
  CHECK(d.dim() == 3);
  CHECK(d.labels == std::vector<int>{0, 1});
  CHECK(d.num_classes == 2);
  CHECK(d.features(1, 1) == 0.5);
  CHECK(d.sample_ids == std::vector<std::uint64_t>{0, 1});

  testing::spit(dir / "named.csv", "rock,1,2\njazz,3,4\nrock,5,6\n");
  const auto n = load_csv((dir / "named.csv").string());
  CHECK(n.class_names == std::vector<std::string>{"rock", "jazz"});
  CHECK(n.labels == std::vector<int>{0, 1, 0});
  CHECK(n.num_classes == 2);
}

TEST_CASE("load_csv errors carry line numbers") {
  const auto dir = testing::scratch_dir("dataset_errors");
  testing::spit(dir / "empty.csv", "# only a header\n\n");
  CHECK(expect_error((dir / "empty.csv").string()).find("no samples") != std::string::npos);

  testing::spit(dir / "ragged.csv", "0,1,2\n1,3\n");
  const auto ragged = expect_error((dir / "ragged.csv").string());
  CHECK(ragged.find(":2:") != std::string::npos);
  CHECK(ragged.find("expected 2 values") != std::string::npos);

  testing::spit(dir / "bad.csv", "0,1,2\n1,3,x\n");
  CHECK(expect_error((dir / "bad.csv").string()).find(":2: bad value") != std::string::npos);

  testing::spit(dir / "label.csv", "0,1,2\n#\ncat,3,4\n");
  const auto label = expect_error((dir / "label.csv").string());
  CHECK(label.find(":3:") != std::string::npos);
  CHECK(label.find("unknown label") != std::string::npos);

  testing::spit(dir / "negative.csv", "0,1,2\n-1,3,4\n");
  CHECK(expect_error((dir / "negative.csv").string()).find("unknown label") != std::string::npos);

  CHECK(expect_error((dir / "missing.csv").string()).find("cannot open") != std::string::npos);
}

TEST_CASE("CSV round trip is bit-exact") {
  const auto d = synth_blobs(3, 7, 11, 2.0, 0.7, 5);
  const auto dir = testing::scratch_dir("dataset_roundtrip");
  const auto path = (dir / "d.csv").string();
  save_csv(d, path, " header line");
  CHECK(testing::slurp(path).rfind("# header line\n", 0) == 0);
  const auto back = load_csv(path);
  CHECK(back.features == d.features);
  CHECK(back.labels == d.labels);
  CHECK(back.num_classes == d.num_classes);
  CHECK(to_csv(back) == to_csv(d));
}

TEST_CASE("time averaging") {
  const auto dir = testing::scratch_dir("dataset_time");
  testing::spit(dir / "t.csv", "1,2,3\n# x\n4,4,4\n-1,1,0\n");
  CHECK(load_time_average((dir / "t.csv").string()) == std::vector<double>{2, 4, 0});
  testing::spit(dir / "r.csv", "1,2,3\n4,4\n");
  CHECK_THROWS(load_time_average((dir / "r.csv").string()));
}

TEST_CASE("synth_blobs shape and structure") {
  const auto d = synth_blobs(10, 100, 433, 6.0, 1.0, 7);
  CHECK(d.size() == 1000);
  CHECK(d.dim() == 433);
  CHECK(d.num_classes == 10);
  for (int c = 0; c < 10; ++c) CHECK(std::count(d.labels.begin(), d.labels.end(), c) == 100);
  CHECK(synth_blobs(10, 100, 433, 6.0, 1.0, 7).features == d.features);
  CHECK_FALSE(synth_blobs(10, 100, 433, 6.0, 1.0, 8).features == d.features);

  const auto flat = synth_blobs(4, 5, 20, 3.0, 0.0, 1);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const std::size_t first = static_cast<std::size_t>(flat.labels[i]) * 5;
    for (std::size_t j = 0; j < 20; ++j) CHECK(flat.features(i, j) == flat.features(first, j));
    double norm2 = 0;
    for (double v : flat.features.row(i)) norm2 += v * v;
    CHECK(std::sqrt(norm2) == doctest::Approx(3.0));
  }
  CHECK_THROWS_AS(synth_blobs(0, 5, 20, 3.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth_blobs(2, 5, 20, -3.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("random centers sit about center_scale * sqrt(2) apart") {
  const std::size_t classes = 40;
  const auto d = synth_blobs(classes, 1, 433, 6.0, 0.0, 21);
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < classes; ++a) {
    for (std::size_t b = a + 1; b < classes; ++b) {
      double d2 = 0;
      for (std::size_t j = 0; j < 433; ++j) d2 += std::pow(d.features(a, j) - d.features(b, j), 2);
      CHECK(std::abs(std::sqrt(d2) - 6.0 * std::sqrt(2.0)) < 0.15 * 6.0 * std::sqrt(2.0));
      sum += std::sqrt(d2);
      ++pairs;
    }
  }
  CHECK(sum / pairs == doctest::Approx(6.0 * std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("add_noise statistics") {
  const auto clean = synth_blobs(5, 40, 500, 2.0, 0.5, 3);  // 10^5 entries
  CHECK(add_noise(clean, 0.0, 1).features == clean.features);
  const double sigma = 0.8;
  const auto noisy = add_noise(clean, sigma, 9);
  const double N = static_cast<double>(clean.features.data.size());
  double sum = 0, sum2 = 0;
  for (std::size_t i = 0; i < clean.features.data.size(); ++i) {
    const double e = noisy.features.data[i] - clean.features.data[i];
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / N;
  const double var = sum2 / N - mean * mean;
  CHECK(std::abs(mean) < 5 * sigma / std::sqrt(N));
  // Var of a squared normal is 2 sigma^4.
  CHECK(std::abs(var - sigma * sigma) < 5 * std::sqrt(2.0) * sigma * sigma / std::sqrt(N));
  CHECK(noisy.labels == clean.labels);
  CHECK_THROWS_AS(add_noise(clean, -1.0, 1), std::invalid_argument);
}

TEST_CASE("noise commutes with splitting") {
  const auto d = synth_blobs(4, 25, 10, 2.0, 1.0, 3);
  const SplitSpec spec{0.8, 5, true};
  const auto noisy_then_split = split(add_noise(d, 0.5, 77), spec);
  const auto s = split(d, spec);
  CHECK(add_noise(s.train, 0.5, 77).features == noisy_then_split.train.features);
  CHECK(add_noise(s.test, 0.5, 77).features == noisy_then_split.test.features);
}

TEST_CASE("split sizes and partition") {
  const auto d = synth_blobs(10, 100, 3, 1.0, 1.0, 2);
  const auto s = split(d, SplitSpec{0.8, 1, true});
  CHECK(s.train.size() == 800);
  CHECK(s.test.size() == 200);
  for (int c = 0; c < 10; ++c) {
    CHECK(std::count(s.train.labels.begin(), s.train.labels.end(), c) == 80);
    CHECK(std::count(s.test.labels.begin(), s.test.labels.end(), c) == 20);
  }
  std::set<std::size_t> all(s.train_rows.begin(), s.train_rows.end());
  for (std::size_t r : s.test_rows) CHECK(all.insert(r).second);
  CHECK(all.size() == 1000);
  for (std::size_t i = 0; i < s.train.size(); ++i) {
    CHECK(s.train.labels[i] == d.labels[s.train_rows[i]]);
    CHECK(s.train.sample_ids[i] == d.sample_ids[s.train_rows[i]]);
  }

  const auto plain = split(d, SplitSpec{0.8, 1, false});
  CHECK(plain.train.size() == 800);
  CHECK(split(d, SplitSpec{0.8, 1, true}).train_rows == s.train_rows);
  CHECK_FALSE(split(d, SplitSpec{0.8, 2, true}).train_rows == s.train_rows);

  CHECK_THROWS_AS(split(d, SplitSpec{0.0, 1, true}), std::invalid_argument);
  CHECK_THROWS_AS(split(d, SplitSpec{1.0, 1, true}), std::invalid_argument);
  CHECK_THROWS_AS(split(d, SplitSpec{0.0001, 1, true}), std::invalid_argument);
  CHECK_THROWS_AS(split(d, SplitSpec{0.9999, 1, true}), std::invalid_argument);
}

TEST_CASE("standardize") {
  auto train = synth_blobs(2, 30, 4, 3.0, 2.0, 8);
  for (std::size_t i = 0; i < train.size(); ++i) train.features(i, 2) = 0.1;  // constant column
  auto test = synth_blobs(2, 5, 4, 3.0, 2.0, 9);
  const auto z = standardize(train, test);
  for (std::size_t j = 0; j < 4; ++j) {
    double mean = 0, var = 0;
    for (std::size_t i = 0; i < z.train.size(); ++i) mean += z.train.features(i, j);
    mean /= z.train.size();
    for (std::size_t i = 0; i < z.train.size(); ++i) var += std::pow(z.train.features(i, j) - mean, 2);
    var /= z.train.size();
    CHECK(std::abs(mean) < 1e-9);
    if (j == 2) {
      CHECK(var == 0.0);
      for (std::size_t i = 0; i < z.test.size(); ++i) CHECK(z.test.features(i, j) == 0.0);
    } else {
      CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
    }
  }
  // Test rows use the training statistics, not their own.
  for (std::size_t i = 0; i < test.size(); ++i) {
    for (std::size_t j : {0u, 1u, 3u}) {
      CHECK(z.test.features(i, j) == doctest::Approx((test.features(i, j) - z.means[j]) / z.stds[j]));
    }
  }
  const auto own = standardize(test, test);
  CHECK_FALSE(own.test.features == z.test.features);
}

TEST_CASE("k-fold indices") {
  const auto d = synth_blobs(3, 10, 2, 1.0, 1.0, 4);
  const auto folds = kfold_indices(d, 5, 3);
  CHECK(folds.size() == 5);
  std::vector<std::size_t> all;
  for (const auto& f : folds) {
    CHECK(f.size() == 6);
    all.insert(all.end(), f.begin(), f.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expect(30);
  std::iota(expect.begin(), expect.end(), std::size_t{0});
  CHECK(all == expect);
  CHECK_THROWS_AS(kfold_indices(d, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(kfold_indices(d, 31, 3), std::invalid_argument);
}

TEST_CASE("select validates indices") {
  const auto d = synth_blobs(2, 3, 2, 1.0, 1.0, 4);
  CHECK(d.select({5, 0}).labels == std::vector<int>{1, 0});
  CHECK_THROWS(d.select({6}));
}
