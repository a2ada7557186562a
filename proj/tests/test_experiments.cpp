#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bioproj/experiments.hpp"

using namespace bioproj;
using namespace bioproj::experiments;

namespace {

FeatureDataset small_data() { return synth_blobs(5, 30, 20, 6.0, 1.0, 7); }

SweepSpec small_spec(std::vector<GridPoint> grid) {
  SweepSpec s;
  s.grid = std::move(grid);
  s.repeats = 2;
  s.train.epochs = 10;
  return s;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// A report built by hand, for table shape checks.
ExperimentReport fake_report(const std::vector<GridPoint>& grid) {
  ExperimentReport r;
  r.spec.grid = grid;
  r.baseline.accuracies = {0.9, 0.8};
  r.baseline.acc_mean = 0.85;
  for (const auto& g : grid) {
    PointRecord rec;
    rec.point = g;
    rec.accuracies = {0.5, 0.5};
    rec.acc_mean = 0.5;
    r.records.push_back(rec);
  }
  return r;
}

}  // namespace

TEST_CASE("baseline grid reproduces the baseline protocol") {
  const auto data = small_data();
  const auto report = run_sweep(small_spec(preset_grid("baseline")), data);
  REQUIRE(report.records.size() == 1);
  CHECK(report.records[0].accuracies == report.baseline.accuracies);
  CHECK(report.baseline.accuracies.size() == 2);
  CHECK(report.baseline.acc_mean >= 0.9);
  CHECK(report.baseline.sparsity > 0.99);
}

TEST_CASE("raw points without noise share the baseline record") {
  const auto data = small_data();
  const auto report = run_sweep(small_spec({GridPoint{}, GridPoint{Variant::raw, 0.3, 7, 2, 0.0}}), data);
  REQUIRE(report.records.size() == 2);
  CHECK(report.records[0].accuracies == report.baseline.accuracies);
  CHECK(report.records[1].accuracies == report.baseline.accuracies);
  CHECK(report.records[1].point.p == 0.3);
}

TEST_CASE("sweeps are deterministic and independent of threading") {
  const auto data = small_data();
  auto spec = small_spec({{Variant::projected, 0.1, 100, 100, 0.0}, {Variant::capped, 0.1, 100, 10, 0.5}});
  const auto a = report_to_json(run_sweep(spec, data), "x").dump();
  const auto b = report_to_json(run_sweep(spec, data), "x").dump();
  spec.workers = 1;
  const auto c = report_to_json(run_sweep(spec, data), "x").dump();
  CHECK(a == b);
  CHECK(a == c);
  spec.seed = 43;
  CHECK_FALSE(report_to_json(run_sweep(spec, data), "x").dump() == a);
}

TEST_CASE("capping sets the sparsity and k = 0 falls to chance") {
  const auto data = synth_blobs(10, 20, 20, 6.0, 1.0, 3);
  auto spec = small_spec({{Variant::capped, 0.05, 200, 20, 0.0}, {Variant::capped, 0.05, 200, 0, 0.0}});
  const auto report = run_sweep(spec, data);
  CHECK(report.records[0].sparsity == doctest::Approx(0.1));
  CHECK(report.records[1].sparsity == 0.0);
  CHECK(report.records[1].acc_mean == doctest::Approx(0.1));
  CHECK(report.records[1].acc_std == 0.0);
}

TEST_CASE("prepare_features") {
  const auto data = small_data();
  CHECK(prepare_features(data, GridPoint{}, 1, 2).features == data.features);
  const auto proj = prepare_features(data, {Variant::projected, 0.2, 50, 7, 0.0}, 1, 2);
  CHECK(proj.dim() == 50);
  CHECK(proj.labels == data.labels);
  const auto capped = prepare_features(data, {Variant::capped, 0.2, 50, 7, 0.0}, 1, 2);
  for (std::size_t i = 0; i < capped.size(); ++i) {
    const auto row = capped.features.row(i);
    CHECK(std::count_if(row.begin(), row.end(), [](double v) { return v != 0.0; }) <= 7);
  }
  CHECK_FALSE(prepare_features(data, {Variant::raw, 0.05, 0, 0, 1.0}, 1, 2).features == data.features);
}

TEST_CASE("k-fold accuracy is reported on request") {
  auto spec = small_spec(preset_grid("baseline"));
  const auto data = small_data();
  CHECK(std::isnan(run_sweep(spec, data).baseline.cv_acc_mean));
  spec.folds = 3;
  const double cv = run_sweep(spec, data).baseline.cv_acc_mean;
  CHECK(cv >= 0.0);
  CHECK(cv <= 1.0);
}

TEST_CASE("sweep errors") {
  const auto data = small_data();
  CHECK_THROWS_AS(run_sweep(small_spec({}), data), std::invalid_argument);
  auto zero_reps = small_spec(preset_grid("baseline"));
  zero_reps.repeats = 0;
  CHECK_THROWS_AS(run_sweep(zero_reps, data), std::invalid_argument);
  auto one_fold = small_spec(preset_grid("baseline"));
  one_fold.folds = 1;
  CHECK_THROWS_AS(run_sweep(one_fold, data), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(small_spec({{Variant::capped, 0.05, 10, 11, 0.0}}), data), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(small_spec({{Variant::projected, 1.5, 10, 10, 0.0}}), data), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(small_spec({{Variant::raw, 0.05, 0, 0, -1.0}}), data), std::invalid_argument);

  // Too few samples per class leaves an empty test split.
  const auto tiny = synth_blobs(3, 2, 4, 1.0, 1.0, 1);
  try {
    run_sweep(small_spec({{Variant::projected, 0.2, 10, 10, 0.0}}), tiny);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("split") != std::string::npos);
  }
}

TEST_CASE("preset grids") {
  CHECK(preset_grid("baseline").size() == 1);
  const auto p = preset_grid("p");
  CHECK(p.size() == 16);
  CHECK(std::all_of(p.begin(), p.end(), [](const GridPoint& g) { return g.variant == Variant::projected; }));
  CHECK(preset_grid("n").size() == 5);
  CHECK(preset_grid("k").size() == 16);
  CHECK(preset_grid("noise").size() == 15);
  CHECK(preset_grid("noise", {0.0, 3.0}).size() == 6);
  CHECK_THROWS_AS(preset_grid("q"), std::invalid_argument);
}

TEST_CASE("variant keys and axes") {
  const GridPoint cap{Variant::capped, 0.05, 2000, 200, 0.0};
  CHECK(variant_key(cap) == "cap_n2000_p0.05_k200");
  CHECK(variant_key(cap, Axis::k) == "cap_n2000_p0.05");
  CHECK(variant_key({Variant::projected, 0.1, 433, 433, 1.5}, Axis::p) == "proj_n433_s1.5");
  CHECK(variant_key({Variant::projected, 0.1, 433, 433, 1.5}, Axis::noise) == "proj_n433_p0.1");
  CHECK(variant_key(GridPoint{}) == "raw");
  CHECK(parse_axis("noise") == Axis::noise);
  CHECK(parse_axis("k") == Axis::k);
  CHECK(std::string(axis_name(Axis::noise)) == "sigma");
  CHECK_THROWS_AS(parse_axis("m"), std::invalid_argument);
}

TEST_CASE("table shapes") {
  const auto noise = fig_table(fake_report(preset_grid("noise")), Axis::noise);
  CHECK(noise.rfind("sigma,variant,acc_mean,acc_std,repeats\n", 0) == 0);
  CHECK(count_lines(noise) == 1 + 5 * 3);

  const auto p = fig_table(fake_report(preset_grid("p")), Axis::p, " run");
  CHECK(p.rfind("# run\np,variant", 0) == 0);
  CHECK(count_lines(p) == 2 + 8 * 3);  // two variants plus baseline per p
  CHECK(p.find("0.050000000000000003,baseline,0.84999999999999998,0,2\n") != std::string::npos);

  CHECK(count_lines(fig_table(fake_report(preset_grid("n")), Axis::n)) == 1 + 5 * 2);
  CHECK(count_lines(fig_table(fake_report(preset_grid("k")), Axis::k)) == 1 + 8 * 3);

  CHECK_THROWS_AS(fig_table(ExperimentReport{}, Axis::p), std::invalid_argument);
  CHECK_THROWS_AS(fig_table(fake_report(preset_grid("baseline")), Axis::p), std::invalid_argument);
  CHECK_THROWS_AS(fig_table(fake_report(preset_grid("p")), Axis::k), std::invalid_argument);
}

TEST_CASE("report JSON schema") {
  auto spec = small_spec({{Variant::capped, 0.1, 60, 6, 0.0}, GridPoint{}});
  const auto data = small_data();
  const auto j = report_to_json(run_sweep(spec, data), "bioproj sweep (seed=42)");
  CHECK(j["invocation"] == "bioproj sweep (seed=42)");
  CHECK(j["spec"]["dataset"]["kind"] == "synth");
  CHECK(j["baseline"].contains("acc_mean"));
  REQUIRE(j["records"].size() == 2);
  const auto& r0 = j["records"][0];
  for (const char* key : {"p", "n", "k", "sigma", "variant", "acc_mean", "acc_std", "train_seconds", "sparsity"}) {
    CHECK(r0.contains(key));
  }
  CHECK(r0["train_seconds"].is_null());
  CHECK(r0["k"] == 6);
  CHECK(j["records"][1]["p"].is_null());

  spec.record_timings = true;
  const auto t = report_to_json(run_sweep(spec, data), "x");
  CHECK(t["records"][0]["train_seconds"].is_number());
}
