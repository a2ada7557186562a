#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bioproj/row_matrix.hpp"

namespace bioproj {

/// Labeled feature vectors, one sample per row.
///
/// `sample_ids` identify samples independently of their row position; they
/// survive splits and reorderings, and per-sample random streams (noise) are
/// keyed on them.
struct FeatureDataset {
  RowMatrix features;
  std::vector<int> labels;
  std::vector<std::string> class_names;  // empty when labels were numeric
  std::vector<std::uint64_t> sample_ids;
  std::size_t num_classes = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return features.cols; }

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;

  /// Rows `idx` in the given order (ids and labels carried along).
  FeatureDataset select(const std::vector<std::size_t>& idx) const;
};

/// CSV: optional `#` comment lines, then `label,v1,...,vdim` per line.
/// Labels are either all non-negative integers, or strings mapped to ids in
/// first-seen order.
FeatureDataset load_csv(const std::string& path);

/// Values are printed with 17 significant digits, so load_csv round-trips
/// them exactly. `comment` (without the leading '#') becomes the first line.
std::string to_csv(const FeatureDataset& d, const std::string& comment = {});
void save_csv(const FeatureDataset& d, const std::string& path, const std::string& comment = {});

/// Mean over the time axis of a (features x time) CSV of plain numbers.
std::vector<double> load_time_average(const std::string& path);

/// Gaussian blobs: class c has a random center of norm center_scale, and
/// each sample adds N(0, noise_sigma^2) per coordinate. Rows are class-major.
FeatureDataset synth_blobs(std::size_t num_classes, std::size_t per_class, std::size_t dim,
                           double center_scale, double noise_sigma, std::uint64_t seed);

/// Adds independent N(0, sigma^2) noise to every entry; sample i's noise
/// comes from a stream keyed on (seed, sample_ids[i]).
FeatureDataset add_noise(const FeatureDataset& d, double sigma, std::uint64_t seed);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct Split {
  FeatureDataset train;
  FeatureDataset test;
  std::vector<std::size_t> train_rows;  // row positions in the source dataset
  std::vector<std::size_t> test_rows;
};

Split split(const FeatureDataset& d, const SplitSpec& spec);

struct Standardized {
  FeatureDataset train;
  FeatureDataset test;
  std::vector<double> means;
  std::vector<double> stds;
};

/// Z-score every feature with the training set's mean and population std.
/// Zero-variance features map to 0 in both sets.
Standardized standardize(const FeatureDataset& train, const FeatureDataset& test);

/// Partition row positions into `folds` stratified folds (seeded).
std::vector<std::vector<std::size_t>> kfold_indices(const FeatureDataset& d, std::size_t folds,
                                                    std::uint64_t seed);

}  // namespace bioproj
