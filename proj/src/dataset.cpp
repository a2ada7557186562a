#include "bioproj/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bioproj/report_io.hpp"
#include "bioproj/rng.hpp"

namespace bioproj {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_label_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && out >= 0;
}

std::runtime_error parse_error(const std::string& path, std::size_t line, const std::string& what) {
  return std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void FeatureDataset::validate() const {
  if (features.rows != labels.size()) throw std::invalid_argument("dataset: row/label count mismatch");
  if (sample_ids.size() != labels.size()) throw std::invalid_argument("dataset: row/id count mismatch");
  if (features.data.size() != features.rows * features.cols) {
    throw std::invalid_argument("dataset: feature storage is not rectangular");
  }
  if (!class_names.empty() && class_names.size() != num_classes) {
    throw std::invalid_argument("dataset: class name count mismatch");
  }
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= num_classes) {
      throw std::invalid_argument("dataset: label out of range");
    }
  }
}

FeatureDataset FeatureDataset::select(const std::vector<std::size_t>& idx) const {
  FeatureDataset out;
  out.features = RowMatrix(idx.size(), features.cols);
  out.class_names = class_names;
  out.num_classes = num_classes;
  out.labels.reserve(idx.size());
  out.sample_ids.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const std::size_t r = idx[i];
    if (r >= size()) throw std::out_of_range("dataset select: row out of range");
    std::copy(features.row(r).begin(), features.row(r).end(), out.features.row(i).begin());
    out.labels.push_back(labels[r]);
    out.sample_ids.push_back(sample_ids[r]);
  }
  return out;
}

FeatureDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  FeatureDataset d;
  std::vector<double> values;
  std::map<std::string, int, std::less<>> name_to_id;
  enum class LabelMode { unknown, numeric, named } mode = LabelMode::unknown;
  int max_label = -1;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_commas(view);
    if (fields.size() < 2) throw parse_error(path, lineno, "expected label and at least one value");
    const std::size_t row_dim = fields.size() - 1;
    if (dim == 0) {
      dim = row_dim;
    } else if (row_dim != dim) {
      throw parse_error(path, lineno,
                        "expected " + std::to_string(dim) + " values, found " + std::to_string(row_dim));
    }

    const std::string_view raw_label = fields[0];
    if (raw_label.empty()) throw parse_error(path, lineno, "unknown label (empty)");
    int numeric = 0;
    const bool is_int = parse_label_int(raw_label, numeric);
    if (mode == LabelMode::unknown) mode = is_int ? LabelMode::numeric : LabelMode::named;
    int label = 0;
    if (mode == LabelMode::numeric) {
      if (!is_int) throw parse_error(path, lineno, "unknown label `" + std::string(raw_label) + "`");
      label = numeric;
      max_label = std::max(max_label, label);
    } else {
      auto it = name_to_id.find(raw_label);
      if (it == name_to_id.end()) {
        it = name_to_id.emplace(std::string(raw_label), static_cast<int>(d.class_names.size())).first;
        d.class_names.emplace_back(raw_label);
      }
      label = it->second;
    }

    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v = 0;
      if (!parse_double(fields[j], v)) {
        throw parse_error(path, lineno, "bad value `" + std::string(fields[j]) + "`");
      }
      values.push_back(v);
    }
    d.labels.push_back(label);
  }
  if (d.labels.empty()) throw std::runtime_error(path + ": no samples");

  d.features = RowMatrix(d.labels.size(), dim, std::move(values));
  d.num_classes = mode == LabelMode::numeric ? static_cast<std::size_t>(max_label + 1)
                                             : d.class_names.size();
  d.sample_ids.resize(d.labels.size());
  std::iota(d.sample_ids.begin(), d.sample_ids.end(), std::uint64_t{0});
  d.validate();
  return d;
}

std::string to_csv(const FeatureDataset& d, const std::string& comment) {
  d.validate();
  std::string out;
  if (!comment.empty()) out += "#" + comment + "\n";
  char buf[40];
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.class_names.empty()) {
      out += std::to_string(d.labels[i]);
    } else {
      out += d.class_names[static_cast<std::size_t>(d.labels[i])];
    }
    for (double v : d.features.row(i)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void save_csv(const FeatureDataset& d, const std::string& path, const std::string& comment) {
  atomic_write(path, to_csv(d, comment));
}

std::vector<double> load_time_average(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> means;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_commas(view);
    if (width == 0) width = fields.size();
    if (fields.size() != width) throw parse_error(path, lineno, "ragged time series row");
    double sum = 0.0;
    for (auto f : fields) {
      double v = 0;
      if (!parse_double(f, v)) throw parse_error(path, lineno, "bad value `" + std::string(f) + "`");
      sum += v;
    }
    means.push_back(sum / static_cast<double>(width));
  }
  if (means.empty()) throw std::runtime_error(path + ": no samples");
  return means;
}

FeatureDataset synth_blobs(std::size_t num_classes, std::size_t per_class, std::size_t dim,
                           double center_scale, double noise_sigma, std::uint64_t seed) {
  if (num_classes == 0 || per_class == 0 || dim == 0) {
    throw std::invalid_argument("synth_blobs: counts must be positive");
  }
  if (!(center_scale >= 0.0) || !(noise_sigma >= 0.0)) {
    throw std::invalid_argument("synth_blobs: scales must be non-negative");
  }
  RowMatrix centers(num_classes, dim);
  for (std::size_t c = 0; c < num_classes; ++c) {
    Engine eng = make_engine(seed, stream::kSynth, 0, c);
    double norm2 = 0.0;
    for (double& v : centers.row(c)) {
      v = standard_normal(eng);
      norm2 += v * v;
    }
    const double scale = center_scale / std::sqrt(norm2);
    for (double& v : centers.row(c)) v *= scale;
  }

  FeatureDataset d;
  d.num_classes = num_classes;
  d.features = RowMatrix(num_classes * per_class, dim);
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      const std::size_t row = c * per_class + i;
      Engine eng = make_engine(seed, stream::kSynth, 1, row);
      auto out = d.features.row(row);
      const auto center = centers.row(c);
      for (std::size_t j = 0; j < dim; ++j) {
        out[j] = center[j] + (noise_sigma > 0.0 ? noise_sigma * standard_normal(eng) : 0.0);
      }
      d.labels.push_back(static_cast<int>(c));
      d.sample_ids.push_back(row);
    }
  }
  return d;
}

FeatureDataset add_noise(const FeatureDataset& d, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("add_noise: sigma must be >= 0");
  FeatureDataset out = d;
  if (sigma == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    Engine eng = make_engine(seed, stream::kNoise, out.sample_ids[i]);
    for (double& v : out.features.row(i)) v += sigma * standard_normal(eng);
  }
  return out;
}

Split split(const FeatureDataset& d, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw std::invalid_argument("split: train fraction must lie in (0, 1)");
  }
  if (d.size() == 0) throw std::invalid_argument("split: empty dataset");
  Engine eng = make_engine(spec.seed, stream::kSplit);

  std::vector<std::vector<std::size_t>> groups;
  if (spec.stratified) {
    groups.resize(d.num_classes);
    for (std::size_t i = 0; i < d.size(); ++i) groups[static_cast<std::size_t>(d.labels[i])].push_back(i);
  } else {
    groups.emplace_back(d.size());
    std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
  }

  Split s;
  for (auto& g : groups) {
    if (g.empty()) continue;
    std::shuffle(g.begin(), g.end(), eng);
    const auto n_train = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(g.size())));
    s.train_rows.insert(s.train_rows.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test_rows.insert(s.test_rows.end(), g.begin() + static_cast<std::ptrdiff_t>(n_train), g.end());
  }
  if (s.train_rows.empty() || s.test_rows.empty()) {
    throw std::invalid_argument("split: train fraction leaves an empty train or test set");
  }
  std::sort(s.train_rows.begin(), s.train_rows.end());
  std::sort(s.test_rows.begin(), s.test_rows.end());
  s.train = d.select(s.train_rows);
  s.test = d.select(s.test_rows);
  return s;
}

Standardized standardize(const FeatureDataset& train, const FeatureDataset& test) {
  if (train.size() == 0) throw std::invalid_argument("standardize: empty training set");
  if (test.size() > 0 && test.dim() != train.dim()) {
    throw std::invalid_argument("standardize: dimension mismatch");
  }
  const std::size_t dim = train.dim();
  const double n = static_cast<double>(train.size());
  Standardized out{train, test, std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = train.features.row(i);
    for (std::size_t j = 0; j < dim; ++j) out.means[j] += r[j];
  }
  for (double& m : out.means) m /= n;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = train.features.row(i);
    for (std::size_t j = 0; j < dim; ++j) out.stds[j] += (r[j] - out.means[j]) * (r[j] - out.means[j]);
  }
  for (double& s : out.stds) s = std::sqrt(s / n);
  // A constant column can leave a rounding-sized std behind; pin it to zero.
  const auto first = train.features.row(0);
  for (std::size_t j = 0; j < dim; ++j) {
    bool constant = true;
    for (std::size_t i = 1; i < train.size() && constant; ++i) constant = train.features(i, j) == first[j];
    if (constant) {
      out.stds[j] = 0.0;
      out.means[j] = first[j];
    }
  }

  const auto apply = [&](FeatureDataset& ds) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      auto r = ds.features.row(i);
      for (std::size_t j = 0; j < dim; ++j) {
        r[j] = out.stds[j] > 0.0 ? (r[j] - out.means[j]) / out.stds[j] : 0.0;
      }
    }
  };
  apply(out.train);
  apply(out.test);
  return out;
}

std::vector<std::vector<std::size_t>> kfold_indices(const FeatureDataset& d, std::size_t folds,
                                                    std::uint64_t seed) {
  if (folds < 2 || folds > d.size()) throw std::invalid_argument("kfold: need 2 <= folds <= samples");
  Engine eng = make_engine(seed, stream::kSplit, folds);
  std::vector<std::vector<std::size_t>> by_class(d.num_classes);
  for (std::size_t i = 0; i < d.size(); ++i) by_class[static_cast<std::size_t>(d.labels[i])].push_back(i);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t next = 0;
  for (auto& g : by_class) {
    std::shuffle(g.begin(), g.end(), eng);
    for (std::size_t i : g) out[next++ % folds].push_back(i);
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

}  // namespace bioproj
