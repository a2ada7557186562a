#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "bioproj/dataset.hpp"
#include "bioproj/parallel.hpp"
#include "bioproj/row_matrix.hpp"

namespace bioproj::svm {

struct TrainSpec {
  double lambda = 1e-4;
  std::size_t epochs = 20;
  std::uint64_t seed = 42;

  void validate() const;
};

/// One-vs-rest linear SVM. Row c of `weights` scores class c; the last
/// column is the bias (trained as the weight of a constant-one feature).
struct SvmModel {
  RowMatrix weights;
  std::size_t num_classes = 0;
  std::size_t dim = 0;
  TrainSpec spec;

  double score(std::size_t c, std::span<const double> x) const;
};

/// Pegasos: for each class, projected stochastic subgradient descent on
///   lambda/2 |w|^2 + mean_i max(0, 1 - y_i <w, [x_i; 1]>)
/// with step 1/(lambda t). The returned weights average the iterates of the
/// second half of the run. Samples are visited in a seeded shuffle of their
/// sample-id order, so the model does not depend on row order.
SvmModel train(const FeatureDataset& d, const TrainSpec& spec, Exec exec = Exec::parallel);

/// argmax_c score(c, x); ties go to the lowest class id.
int predict(const SvmModel& model, std::span<const double> x);

/// Fraction of correctly classified samples.
double evaluate(const SvmModel& model, const FeatureDataset& d);

/// Regularized hinge objective averaged over the one-vs-rest problems.
double objective(const SvmModel& model, const FeatureDataset& d);

/// Text form: `num_classes dim lambda epochs seed`, then one weight row per line.
std::string to_text(const SvmModel& model);
SvmModel from_text(const std::string& text);

}  // namespace bioproj::svm
