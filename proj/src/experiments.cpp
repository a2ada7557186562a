#include "bioproj/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "bioproj/parallel.hpp"
#include "bioproj/report_io.hpp"
#include "bioproj/rng.hpp"
#include "bioproj/transform.hpp"

namespace bioproj::experiments {
namespace {

using Clock = std::chrono::steady_clock;

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::raw: return "raw";
    case Variant::projected: return "proj";
    case Variant::capped: return "cap";
  }
  return "?";
}

bool on_axis(const GridPoint& pt, Axis axis) {
  switch (axis) {
    case Axis::p:
    case Axis::n: return pt.variant != Variant::raw;
    case Axis::k: return pt.variant == Variant::capped;
    case Axis::noise: return true;
  }
  return false;
}

double axis_value(const GridPoint& pt, Axis axis) {
  switch (axis) {
    case Axis::p: return pt.p;
    case Axis::n: return static_cast<double>(pt.n);
    case Axis::k: return static_cast<double>(pt.k);
    case Axis::noise: return pt.sigma;
  }
  return 0.0;
}

void summarize(PointRecord& rec, const std::vector<Outcome>& outcomes) {
  const double reps = static_cast<double>(outcomes.size());
  rec.accuracies.clear();
  double acc = 0.0, secs = 0.0, dens = 0.0, cv = 0.0;
  for (const auto& o : outcomes) {
    rec.accuracies.push_back(o.accuracy);
    acc += o.accuracy;
    secs += o.train_seconds;
    dens += o.density;
    cv += o.cv_accuracy;
  }
  rec.acc_mean = acc / reps;
  double ss = 0.0;
  for (double a : rec.accuracies) ss += (a - rec.acc_mean) * (a - rec.acc_mean);
  rec.acc_std = outcomes.size() > 1 ? std::sqrt(ss / (reps - 1.0)) : 0.0;
  rec.train_seconds = secs / reps;
  rec.sparsity = dens / reps;
  rec.cv_acc_mean = cv / reps;  // NaN when k-fold is off
}

// p, n and k mean nothing without the transform.
bool is_baseline(const GridPoint& pt) { return pt.variant == Variant::raw && pt.sigma == 0.0; }

nlohmann::ordered_json real_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void GridPoint::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("grid: sigma must be >= 0");
  if (variant == Variant::raw) return;
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("grid: p must lie in (0, 1)");
  if (n == 0) throw std::invalid_argument("grid: n must be positive");
  if (variant == Variant::capped && k > n) throw std::invalid_argument("grid: k exceeds n");
}

FeatureDataset DatasetSource::load() const {
  if (!path.empty()) return load_csv(path);
  return synth_blobs(classes, per_class, dim, center_scale, noise_sigma, seed);
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep: grid is empty");
  for (const auto& g : grid) g.validate();
  if (repeats == 0) throw std::invalid_argument("sweep: repeats must be at least 1");
  if (folds == 1) throw std::invalid_argument("sweep: folds must be 0 (off) or >= 2");
  train.validate();
}

FeatureDataset prepare_features(const FeatureDataset& data, const GridPoint& point,
                                std::uint64_t noise_seed, std::uint64_t transform_seed) {
  point.validate();
  FeatureDataset noisy = add_noise(data, point.sigma, noise_seed);
  if (point.variant == Variant::raw) return noisy;
  TransformConfig cfg;
  cfg.input_dim = data.dim();
  cfg.output_dim = point.n;
  cfg.bernoulli_p = point.p;
  cfg.cap_k = point.variant == Variant::capped ? point.k : point.n;
  cfg.seed = transform_seed;
  const Transform t(cfg, Exec::serial);
  noisy.features = t.forward_batch(noisy.features, Exec::serial);
  return noisy;
}

Outcome run_point(const FeatureDataset& data, const GridPoint& point, const SweepSpec& spec,
                  std::size_t grid_index, std::size_t repeat) {
  // Noise, split and training streams depend on the repeat only, so every
  // variant sees the same noisy samples and the same partition.
  const std::uint64_t noise_seed = derive_seed(spec.seed, stream::kNoise, repeat);
  const std::uint64_t matrix_seed = derive_seed(spec.seed, stream::kMatrix, grid_index, repeat);
  SplitSpec split_spec = spec.split;
  split_spec.seed = derive_seed(spec.seed, stream::kSplit, repeat);
  svm::TrainSpec train_spec = spec.train;
  train_spec.seed = derive_seed(spec.seed, stream::kTrain, repeat);

  const FeatureDataset features = prepare_features(data, point, noise_seed, matrix_seed);
  Outcome out;
  std::size_t nonzero = 0;
  for (double v : features.features.data) nonzero += v != 0.0;
  out.density = features.features.data.empty()
                    ? 0.0
                    : static_cast<double>(nonzero) / static_cast<double>(features.features.data.size());

  const Split parts = split(features, split_spec);
  const Standardized z = standardize(parts.train, parts.test);
  const auto t0 = Clock::now();
  const svm::SvmModel model = svm::train(z.train, train_spec, Exec::serial);
  out.train_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  out.accuracy = svm::evaluate(model, z.test);

  if (spec.folds >= 2) {
    const auto folds = kfold_indices(features, spec.folds, split_spec.seed);
    double acc = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::vector<std::size_t> train_rows;
      for (std::size_t g = 0; g < folds.size(); ++g) {
        if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
      }
      std::sort(train_rows.begin(), train_rows.end());
      const Standardized zf = standardize(features.select(train_rows), features.select(folds[f]));
      acc += svm::evaluate(svm::train(zf.train, train_spec, Exec::serial), zf.test);
    }
    out.cv_accuracy = acc / static_cast<double>(folds.size());
  }
  return out;
}

ExperimentReport run_sweep(const SweepSpec& spec) { return run_sweep(spec, spec.source.load()); }

ExperimentReport run_sweep(const SweepSpec& spec, const FeatureDataset& data) {
  spec.validate();
  data.validate();
  const GridPoint baseline_point{};
  // Job 0..repeats-1 is the baseline; grid points equal to it reuse its record.
  std::vector<std::size_t> distinct;
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    if (!is_baseline(spec.grid[g])) distinct.push_back(g);
  }
  const std::size_t groups = distinct.size() + 1;
  std::vector<Outcome> outcomes(groups * spec.repeats);
  for_each_index(
      outcomes.size(), spec.workers == 1 ? Exec::serial : Exec::parallel,
      [&](std::size_t job) {
        const std::size_t group = job / spec.repeats;
        const std::size_t repeat = job % spec.repeats;
        if (group == 0) {
          outcomes[job] = run_point(data, baseline_point, spec, spec.grid.size(), repeat);
        } else {
          const std::size_t g = distinct[group - 1];
          try {
            outcomes[job] = run_point(data, spec.grid[g], spec, g, repeat);
          } catch (const std::exception& e) {
            throw std::runtime_error("grid point " + std::to_string(g) + " (" +
                                     variant_key(spec.grid[g]) + "): " + e.what());
          }
        }
      },
      spec.workers);

  const auto slice = [&](std::size_t group) {
    return std::vector<Outcome>(outcomes.begin() + static_cast<std::ptrdiff_t>(group * spec.repeats),
                                outcomes.begin() + static_cast<std::ptrdiff_t>((group + 1) * spec.repeats));
  };
  ExperimentReport report;
  report.spec = spec;
  report.baseline.point = baseline_point;
  summarize(report.baseline, slice(0));
  std::size_t next = 1;
  for (const auto& g : spec.grid) {
    if (is_baseline(g)) {
      report.records.push_back(report.baseline);
      report.records.back().point = g;
      continue;
    }
    PointRecord rec;
    rec.point = g;
    summarize(rec, slice(next++));
    report.records.push_back(rec);
  }
  return report;
}

std::vector<GridPoint> preset_grid(const std::string& name, const std::vector<double>& sigmas) {
  std::vector<GridPoint> grid;
  if (name == "baseline") {
    grid.push_back(GridPoint{});
  } else if (name == "p") {
    for (std::size_t n : {433, 2000}) {
      for (double p : {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        grid.push_back({Variant::projected, p, n, n, 0.0});
      }
    }
  } else if (name == "n") {
    for (std::size_t n : {433, 1000, 2000, 3000, 4000}) grid.push_back({Variant::projected, 0.05, n, n, 0.0});
  } else if (name == "k") {
    for (std::size_t n : {433, 2000}) {
      for (std::size_t k : {0, 10, 25, 50, 100, 200, 300, 433}) {
        grid.push_back({Variant::capped, 0.05, n, k, 0.0});
      }
    }
  } else if (name == "noise") {
    const std::vector<double> levels = sigmas.empty() ? std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0} : sigmas;
    for (double s : levels) {
      grid.push_back({Variant::raw, 0.05, 0, 0, s});
      grid.push_back({Variant::projected, 0.05, 2000, 2000, s});
      grid.push_back({Variant::capped, 0.05, 2000, 200, s});
    }
  } else {
    throw std::invalid_argument("unknown grid preset `" + name + "` (baseline, p, n, k, noise)");
  }
  return grid;
}

Axis parse_axis(const std::string& name) {
  if (name == "p") return Axis::p;
  if (name == "n") return Axis::n;
  if (name == "k") return Axis::k;
  if (name == "noise" || name == "sigma") return Axis::noise;
  throw std::invalid_argument("unknown axis `" + name + "` (p, n, k, noise)");
}

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::p: return "p";
    case Axis::n: return "n";
    case Axis::k: return "k";
    case Axis::noise: return "sigma";
  }
  return "?";
}

std::string variant_key(const GridPoint& point, std::optional<Axis> axis) {
  std::string key = variant_name(point.variant);
  if (point.variant != Variant::raw) {
    if (axis != Axis::n) key += "_n" + std::to_string(point.n);
    if (axis != Axis::p) key += "_p" + short_real(point.p);
    if (point.variant == Variant::capped && axis != Axis::k) key += "_k" + std::to_string(point.k);
  }
  if (axis != Axis::noise && point.sigma != 0.0) key += "_s" + short_real(point.sigma);
  return key;
}

std::string fig_table(const ExperimentReport& report, Axis axis, const std::string& header) {
  if (report.records.empty()) throw std::invalid_argument("fig_table: empty report");
  std::vector<double> values;
  std::vector<std::string> variants;
  std::map<std::pair<double, std::string>, const PointRecord*> cells;
  for (const auto& rec : report.records) {
    if (!on_axis(rec.point, axis)) continue;
    const double v = axis_value(rec.point, axis);
    const std::string key = variant_key(rec.point, axis);
    if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
    if (std::find(variants.begin(), variants.end(), key) == variants.end()) variants.push_back(key);
    cells[{v, key}] = &rec;
  }
  if (values.empty()) {
    throw std::invalid_argument(std::string("fig_table: report has no points on axis ") + axis_name(axis));
  }
  if (axis != Axis::noise) {
    variants.push_back("baseline");
    for (double v : values) cells[{v, "baseline"}] = &report.baseline;
  }
  std::sort(values.begin(), values.end());

  std::string out;
  if (!header.empty()) out += "#" + header + "\n";
  out += std::string(axis_name(axis)) + ",variant,acc_mean,acc_std,repeats\n";
  for (double v : values) {
    for (const auto& key : variants) {
      const auto it = cells.find({v, key});
      if (it == cells.end()) continue;
      out += format_real(v) + ',' + key + ',' + format_real(it->second->acc_mean) + ',' +
             format_real(it->second->acc_std) + ',' + std::to_string(it->second->accuracies.size()) + '\n';
    }
  }
  return out;
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report, const std::string& invocation) {
  const SweepSpec& s = report.spec;
  nlohmann::ordered_json j;
  j["invocation"] = invocation;
  nlohmann::ordered_json source;
  if (s.source.path.empty()) {
    source = {{"kind", "synth"},
              {"classes", s.source.classes},
              {"per_class", s.source.per_class},
              {"dim", s.source.dim},
              {"center_scale", s.source.center_scale},
              {"noise_sigma", s.source.noise_sigma},
              {"seed", s.source.seed}};
  } else {
    source = {{"kind", "csv"}, {"path", s.source.path}};
  }
  j["spec"] = {{"dataset", source},
               {"grid_size", s.grid.size()},
               {"repeats", s.repeats},
               {"train_fraction", s.split.train_fraction},
               {"stratified", s.split.stratified},
               {"lambda", s.train.lambda},
               {"epochs", s.train.epochs},
               {"folds", s.folds},
               {"seed", s.seed}};
  j["baseline"] = {{"acc_mean", report.baseline.acc_mean}, {"acc_std", report.baseline.acc_std}};
  auto& records = j["records"] = nlohmann::ordered_json::array();
  for (const auto& rec : report.records) {
    const GridPoint& g = rec.point;
    const bool transformed = g.variant != Variant::raw;
    records.push_back({{"p", transformed ? nlohmann::ordered_json(g.p) : nullptr},
                       {"n", transformed ? nlohmann::ordered_json(g.n) : nullptr},
                       {"k", g.variant == Variant::capped ? nlohmann::ordered_json(g.k) : nullptr},
                       {"sigma", g.sigma},
                       {"variant", variant_key(g)},
                       {"acc_mean", rec.acc_mean},
                       {"acc_std", rec.acc_std},
                       {"cv_acc_mean", real_or_null(rec.cv_acc_mean)},
                       {"train_seconds", s.record_timings ? nlohmann::ordered_json(rec.train_seconds) : nullptr},
                       {"sparsity", rec.sparsity}});
  }
  return j;
}

}  // namespace bioproj::experiments
