#include "bioproj/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bioproj/rng.hpp"

namespace bioproj::svm {
namespace {

double dot_aug(std::span<const double> w, std::span<const double> x) {
  double s = w[x.size()];  // bias
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

// Binary Pegasos for class `target`, writing the weight row into w.
void train_binary(const FeatureDataset& d, int target, const TrainSpec& spec,
                  const std::vector<std::vector<std::size_t>>& epoch_orders, std::span<double> w) {
  const std::size_t dim = d.dim();
  const double lambda = spec.lambda;
  const double radius = 1.0 / std::sqrt(lambda);
  // w = scale * v; the scale absorbs the (1 - eta lambda) shrink in O(1).
  std::vector<double> v(dim + 1, 0.0);
  double scale = 1.0;
  double v_norm2 = 0.0;
  std::size_t t = 0;
  // The returned model is the mean of the iterates over the second half of the steps.
  std::size_t total = 0;
  for (const auto& order : epoch_orders) total += order.size();
  const std::size_t average_from = total / 2 + 1;
  std::vector<double> avg(dim + 1, 0.0);

  for (const auto& order : epoch_orders) {
    for (std::size_t row : order) {
      ++t;
      const auto x = d.features.row(row);
      const double y = d.labels[row] == target ? 1.0 : -1.0;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double vx = dot_aug(v, x);
      const double margin = y * scale * vx;

      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        v_norm2 = 0.0;
      } else {
        scale *= shrink;
      }

      if (margin < 1.0) {
        const double c = eta * y / scale;
        double x_norm2 = 1.0;
        for (double e : x) x_norm2 += e * e;
        const double v_dot_x = shrink <= 0.0 ? 0.0 : vx;
        for (std::size_t j = 0; j < dim; ++j) v[j] += c * x[j];
        v[dim] += c;
        v_norm2 += 2.0 * c * v_dot_x + c * c * x_norm2;
      }

      const double w_norm = scale * std::sqrt(std::max(v_norm2, 0.0));
      if (w_norm > radius) scale *= radius / w_norm;

      if (scale < 1e-12) {
        for (double& e : v) e *= scale;
        v_norm2 *= scale * scale;
        scale = 1.0;
      }
      if (t >= average_from) {
        for (std::size_t j = 0; j <= dim; ++j) avg[j] += scale * v[j];
      }
    }
  }
  const double count = static_cast<double>(total - average_from + 1);
  for (std::size_t j = 0; j <= dim; ++j) w[j] = avg[j] / count;
}

}  // namespace

void TrainSpec::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("svm: lambda must be positive");
  if (epochs == 0) throw std::invalid_argument("svm: epochs must be positive");
}

double SvmModel::score(std::size_t c, std::span<const double> x) const {
  return dot_aug(weights.row(c), x);
}

SvmModel train(const FeatureDataset& d, const TrainSpec& spec, Exec exec) {
  spec.validate();
  d.validate();
  if (d.size() == 0) throw std::invalid_argument("svm: empty dataset");
  std::vector<std::size_t> per_class(d.num_classes, 0);
  for (int l : d.labels) ++per_class[static_cast<std::size_t>(l)];
  const auto present = std::count_if(per_class.begin(), per_class.end(), [](std::size_t c) { return c > 0; });
  if (present < 2) throw std::invalid_argument("svm: need at least two classes with samples");

  std::vector<std::size_t> canonical(d.size());
  std::iota(canonical.begin(), canonical.end(), std::size_t{0});
  std::stable_sort(canonical.begin(), canonical.end(),
                   [&](std::size_t a, std::size_t b) { return d.sample_ids[a] < d.sample_ids[b]; });
  std::vector<std::vector<std::size_t>> orders(spec.epochs, canonical);
  for (std::size_t e = 0; e < spec.epochs; ++e) {
    Engine eng = make_engine(spec.seed, stream::kTrain, e);
    std::shuffle(orders[e].begin(), orders[e].end(), eng);
  }

  SvmModel model;
  model.num_classes = d.num_classes;
  model.dim = d.dim();
  model.spec = spec;
  model.weights = RowMatrix(d.num_classes, d.dim() + 1);
  for_each_index(d.num_classes, exec, [&](std::size_t c) {
    train_binary(d, static_cast<int>(c), spec, orders, model.weights.row(c));
  });
  return model;
}

int predict(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.dim) throw std::invalid_argument("predict: dimension mismatch");
  int best = 0;
  double best_score = model.score(0, x);
  for (std::size_t c = 1; c < model.num_classes; ++c) {
    const double s = model.score(c, x);
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(c);
    }
  }
  return best;
}

double evaluate(const SvmModel& model, const FeatureDataset& d) {
  if (d.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
  if (d.dim() != model.dim) throw std::invalid_argument("evaluate: dimension mismatch");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (predict(model, d.features.row(i)) == d.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(d.size());
}

double objective(const SvmModel& model, const FeatureDataset& d) {
  if (d.size() == 0) throw std::invalid_argument("objective: empty dataset");
  if (d.dim() != model.dim) throw std::invalid_argument("objective: dimension mismatch");
  double total = 0.0;
  for (std::size_t c = 0; c < model.num_classes; ++c) {
    const auto w = model.weights.row(c);
    double reg = 0.0;
    for (double e : w) reg += e * e;
    double hinge = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double y = d.labels[i] == static_cast<int>(c) ? 1.0 : -1.0;
      hinge += std::max(0.0, 1.0 - y * model.score(c, d.features.row(i)));
    }
    total += 0.5 * model.spec.lambda * reg + hinge / static_cast<double>(d.size());
  }
  return total / static_cast<double>(model.num_classes);
}

std::string to_text(const SvmModel& model) {
  char buf[40];
  std::string out;
  std::snprintf(buf, sizeof buf, "%.17g", model.spec.lambda);
  out += std::to_string(model.num_classes) + ' ' + std::to_string(model.dim) + ' ' + buf + ' ' +
         std::to_string(model.spec.epochs) + ' ' + std::to_string(model.spec.seed) + '\n';
  for (std::size_t c = 0; c < model.num_classes; ++c) {
    const auto w = model.weights.row(c);
    for (std::size_t j = 0; j < w.size(); ++j) {
      std::snprintf(buf, sizeof buf, j == 0 ? "%.17g" : " %.17g", w[j]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

SvmModel from_text(const std::string& text) {
  std::istringstream in(text);
  SvmModel m;
  if (!(in >> m.num_classes >> m.dim >> m.spec.lambda >> m.spec.epochs >> m.spec.seed)) {
    throw std::runtime_error("model text: malformed header");
  }
  if (m.num_classes == 0 || m.dim == 0) throw std::runtime_error("model text: empty model");
  m.weights = RowMatrix(m.num_classes, m.dim + 1);
  for (double& w : m.weights.data) {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("model text: truncated weights");
    std::size_t used = 0;
    w = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(w)) throw std::runtime_error("model text: bad weight");
  }
  std::string extra;
  if (in >> extra) throw std::runtime_error("model text: trailing data");
  return m;
}

}  // namespace bioproj::svm
