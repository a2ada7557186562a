#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bioproj/dataset.hpp"
#include "bioproj/svm.hpp"

namespace bioproj::experiments {

enum class Variant {
  raw,        // classify the (noisy) features directly
  projected,  // random projection, no cap
  capped,     // projection followed by the top-k cap
};

struct GridPoint {
  Variant variant = Variant::raw;
  double p = 0.05;
  std::size_t n = 0;
  std::size_t k = 0;
  double sigma = 0.0;

  void validate() const;
  bool operator==(const GridPoint&) const = default;
};

/// Synthetic blobs, or a feature CSV when `path` is set.
struct DatasetSource {
  std::string path;
  std::size_t classes = 10;
  std::size_t per_class = 100;
  std::size_t dim = 433;
  double center_scale = 6.0;
  double noise_sigma = 1.0;
  std::uint64_t seed = 7;

  FeatureDataset load() const;
};

struct SweepSpec {
  DatasetSource source;
  std::vector<GridPoint> grid;
  std::size_t repeats = 5;
  SplitSpec split;
  svm::TrainSpec train;
  std::uint64_t seed = 42;
  std::size_t folds = 0;  // >= 2 adds k-fold accuracy per grid point
  int workers = 0;        // 1 = serial reference path
  bool record_timings = false;

  void validate() const;
};

struct PointRecord {
  GridPoint point;
  std::vector<double> accuracies;  // one per repeat
  double acc_mean = 0.0;
  double acc_std = 0.0;
  double cv_acc_mean = std::numeric_limits<double>::quiet_NaN();
  double train_seconds = 0.0;  // mean over repeats
  double sparsity = 0.0;       // mean fraction of nonzero entries fed to the SVM
};

struct ExperimentReport {
  SweepSpec spec;
  PointRecord baseline;
  std::vector<PointRecord> records;  // in grid order
};

/// Noise, then (optionally) the transform, for one grid point.
FeatureDataset prepare_features(const FeatureDataset& data, const GridPoint& point,
                                std::uint64_t noise_seed, std::uint64_t transform_seed);

struct Outcome {
  double accuracy = 0.0;
  double cv_accuracy = std::numeric_limits<double>::quiet_NaN();
  double train_seconds = 0.0;
  double density = 0.0;
};

/// One repeat of one grid point: prepare -> split -> standardize -> train -> evaluate.
Outcome run_point(const FeatureDataset& data, const GridPoint& point, const SweepSpec& spec,
                  std::size_t grid_index, std::size_t repeat);

ExperimentReport run_sweep(const SweepSpec& spec);
ExperimentReport run_sweep(const SweepSpec& spec, const FeatureDataset& data);

/// Named grids: baseline, p, n, k, noise. `sigmas` feeds the noise grid.
std::vector<GridPoint> preset_grid(const std::string& name, const std::vector<double>& sigmas = {});

enum class Axis { p, n, k, noise };
Axis parse_axis(const std::string& name);
const char* axis_name(Axis axis);

/// Variant name of a point with the swept axis left out, e.g. "proj_n2000".
std::string variant_key(const GridPoint& point, std::optional<Axis> axis = std::nullopt);

/// Tidy table: one row per (axis value, variant) with mean/std accuracy.
/// The p, n and k tables carry the baseline as its own variant.
std::string fig_table(const ExperimentReport& report, Axis axis, const std::string& header = {});

nlohmann::ordered_json report_to_json(const ExperimentReport& report, const std::string& invocation);

}  // namespace bioproj::experiments
