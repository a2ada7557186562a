// bioproj: command-line front end for the expand-and-cap transform, its
// closed-form bounds, the Monte Carlo verification suites and the
// classification sweeps. Exit codes: 0 ok, 1 invalid input, 2 a verify suite
// reported pass=false.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bioproj/bounds.hpp"
#include "bioproj/dataset.hpp"
#include "bioproj/experiments.hpp"
#include "bioproj/mc_verify.hpp"
#include "bioproj/report_io.hpp"
#include "bioproj/transform.hpp"

namespace {

using namespace bioproj;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCheckFailed = 2;

/// `a:b[:step]` (inclusive) or `a,b,c`.
std::vector<std::size_t> parse_range(const std::string& text) {
  std::vector<std::size_t> out;
  const auto to_size = [&](const std::string& s) {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument("bad range value `" + s + "`");
    return static_cast<std::size_t>(v);
  };
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream ss(text);
      for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
      if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("");
      const std::size_t lo = to_size(parts[0]);
      const std::size_t hi = to_size(parts[1]);
      const std::size_t step = parts.size() == 3 ? to_size(parts[2]) : 1;
      if (step == 0 || lo > hi) throw std::invalid_argument("");
      for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
    } else {
      std::stringstream ss(text);
      for (std::string part; std::getline(ss, part, ',');) out.push_back(to_size(part));
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad range `" + text + "` (expected a:b[:step] or a,b,c)");
  }
  if (out.empty()) throw std::invalid_argument("empty range `" + text + "`");
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw std::invalid_argument("bad number `" + part + "`");
    out.push_back(v);
  }
  return out;
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return path.substr(0, dot) + ext;
  }
  return path + ext;
}

std::string invocation_line(int argc, char** argv, std::uint64_t seed) {
  std::string s = " bioproj";
  for (int i = 1; i < argc; ++i) {
    s += ' ';
    s += argv[i];
  }
  return s + " (seed=" + std::to_string(seed) + ")";
}

struct TransformArgs {
  std::string in, out, dump_matrix;
  std::size_t m = 0, n = 2000, k = 200;  // m = 0: take it from the file
  double p = 0.05;
  std::uint64_t seed = 42;
};

int run_transform(const TransformArgs& a, const std::string& header) {
  FeatureDataset d = load_csv(a.in);
  if (a.m != 0 && a.m != d.dim()) {
    throw std::invalid_argument("--m " + std::to_string(a.m) + " does not match the file's dimension " +
                                std::to_string(d.dim()));
  }
  TransformConfig cfg{d.dim(), a.n, a.p, a.k, a.seed};
  const Transform t(cfg);
  d.features = t.forward_batch(d.features);
  // Invocation first, then the config block as further comment lines.
  std::string comment = header;
  std::istringstream block(cfg.to_text());
  for (std::string line; std::getline(block, line);) comment += "\n#" + line;
  save_csv(d, a.out, comment);
  if (!a.dump_matrix.empty()) {
    std::ostringstream m;
    write_matrix(m, t.matrix());
    atomic_write(a.dump_matrix, m.str());
  }
  std::cout << "transformed " << d.size() << " rows: " << cfg.input_dim << " -> " << cfg.output_dim
            << " (k=" << cfg.cap_k << ", seed=" << cfg.seed << ")\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string suite;
  std::string m = "", n = "";
  std::size_t trials = 0, length = 2000;
  double p = 0.05, epsilon = 0.5;
  std::uint64_t seed = 42;
  int workers = 0;
  std::optional<double> min_fraction;
  std::string out;
};

int run_verify(const VerifyArgs& a, const std::string& header) {
  mc::McConfig cfg;
  cfg.seed = a.seed;
  cfg.p = a.p;
  cfg.epsilon = a.epsilon;
  cfg.workers = a.workers;
  if (a.trials != 0) {
    cfg.trials = a.trials;
  } else if (a.suite == "invertibility") {
    cfg.trials = 10000;
  } else if (a.suite == "opnorm") {
    cfg.trials = 50;
  } else if (a.suite == "det") {
    cfg.trials = 500;
  } else {
    cfg.trials = 1000;
  }
  const auto single = [](const std::string& text, std::size_t fallback, const char* name) {
    if (text.empty()) return fallback;
    const auto v = parse_range(text);
    if (v.size() != 1) throw std::invalid_argument(std::string("--") + name + " takes a single value here");
    return v.front();
  };

  mc::SuiteResult result;
  if (a.suite == "entries") {
    const std::size_t n = single(a.n, 2000, "n");
    const std::size_t m = single(a.m, 433, "m");
    cfg.n_grid = {n};
    cfg.m_grid = {m};
    result = mc::entry_distribution(cfg, n, m);
  } else if (a.suite == "invertibility") {
    cfg.m_grid = parse_range(a.m.empty() ? "1:128" : a.m);
    result = mc::invertibility_curve(cfg);
  } else if (a.suite == "jl") {
    const std::size_t m = single(a.m, 50, "m");
    cfg.m_grid = {m};
    cfg.n_grid = parse_range(a.n.empty() ? "2000" : a.n);
    result = mc::jl_preservation(cfg, m);
  } else if (a.suite == "opnorm") {
    const std::size_t m = single(a.m, 100, "m");
    cfg.m_grid = {m};
    cfg.n_grid = parse_range(a.n.empty() ? "500,1000,2000" : a.n);
    result = mc::opnorm_scaling(cfg, m, cfg.n_grid);
  } else if (a.suite == "det") {
    const std::size_t m = single(a.m, 64, "m");
    cfg.m_grid = {m};
    result = mc::det_bound_incidence(cfg, m, a.epsilon);
  } else if (a.suite == "cap") {
    cfg.n_grid = {a.length};
    result = mc::cap_bound_sweep(cfg, a.length);
  } else {
    throw std::invalid_argument("unknown suite `" + a.suite + "`");
  }

  if (a.min_fraction) {
    if (a.suite != "invertibility" && a.suite != "jl" && a.suite != "det") {
      throw std::invalid_argument("--min-fraction applies to invertibility, jl and det only");
    }
    for (auto& r : result.records) {
      if (r.estimate < *a.min_fraction) r.pass = false;
    }
  }

  for (const auto& r : result.records) {
    const std::string param = std::isnan(r.param) ? "" : " (" + format_real(r.param) + ")";
    std::printf("%-12s %-34s m=%-5zu n=%-5zu estimate=%-12.6g stderr=%-10.3g bound=%-12.6g %s\n",
                result.suite.c_str(), (r.label + param).c_str(), r.m, r.n, r.estimate, r.std_error,
                r.bound, r.pass ? "PASS" : "FAIL");
  }
  std::printf("wall time %.3f s\n", result.wall_seconds);

  if (!a.out.empty()) {
    atomic_write(a.out, suite_to_csv(result, header));
    atomic_write(replace_extension(a.out, ".json"), suite_to_json(result, cfg, header.substr(1)).dump(2) + "\n");
  }
  return result.all_pass() ? kExitOk : kExitCheckFailed;
}

struct SweepArgs {
  std::string dataset = "synth";
  std::string grid = "baseline";
  std::string sigmas;
  std::string table;
  std::string out;
  std::size_t repeats = 5, epochs = 20, folds = 0;
  std::size_t n = 2000, k = 200;
  double p = 0.05, sigma = 0.0;
  double lambda = 1e-4, train_fraction = 0.8;
  std::uint64_t seed = 42;
  int workers = 0;
  bool timings = false;
  experiments::DatasetSource synth;
};

int run_sweep(SweepArgs a, const std::string& header) {
  experiments::SweepSpec spec;
  spec.source = a.synth;
  if (a.dataset != "synth") spec.source.path = a.dataset;
  if (a.grid == "single") {
    const auto variant = a.k == a.n ? experiments::Variant::projected : experiments::Variant::capped;
    spec.grid = {{variant, a.p, a.n, a.k, a.sigma}};
  } else {
    spec.grid = experiments::preset_grid(a.grid, a.sigmas.empty() ? std::vector<double>{} : parse_reals(a.sigmas));
  }
  spec.repeats = a.repeats;
  spec.split.train_fraction = a.train_fraction;
  spec.train.lambda = a.lambda;
  spec.train.epochs = a.epochs;
  spec.seed = a.seed;
  spec.folds = a.folds;
  spec.workers = a.workers;
  spec.record_timings = a.timings;

  experiments::Axis axis = experiments::Axis::noise;
  if (!a.table.empty()) {
    axis = experiments::parse_axis(a.table);
  } else if (a.grid == "p" || a.grid == "n" || a.grid == "k") {
    axis = experiments::parse_axis(a.grid);
  }

  const auto report = experiments::run_sweep(spec);
  std::printf("baseline accuracy %.4f +- %.4f\n", report.baseline.acc_mean, report.baseline.acc_std);
  for (const auto& r : report.records) {
    std::printf("%-28s sigma=%-6g acc=%.4f +- %.4f density=%.4f\n",
                experiments::variant_key(r.point).c_str(), r.point.sigma, r.acc_mean, r.acc_std,
                r.sparsity);
  }

  if (!a.out.empty()) {
    const std::string table = experiments::fig_table(report, axis, header);
    atomic_write(a.out, experiments::report_to_json(report, header.substr(1)).dump(2) + "\n");
    atomic_write(replace_extension(a.out, ".csv"), table);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse random expansion with top-k capping: transform, bounds, verification, sweeps"};
  app.require_subcommand(1);

  TransformArgs targs;
  auto* transform = app.add_subcommand("transform", "Apply cap(M s, k) to every row of a feature CSV");
  transform->add_option("--in", targs.in, "Input feature CSV")->required();
  transform->add_option("--out", targs.out, "Output CSV")->required();
  transform->add_option("--m", targs.m, "Expected input dimension (checked against the file)");
  transform->add_option("--n", targs.n, "Projection dimension")->capture_default_str();
  transform->add_option("--p", targs.p, "Bernoulli parameter")->capture_default_str();
  transform->add_option("--k", targs.k, "Cap size (k = n disables capping)")->capture_default_str();
  transform->add_option("--seed", targs.seed, "Matrix seed")->capture_default_str();
  transform->add_option("--dump-matrix", targs.dump_matrix, "Also write the sampled matrix here");

  std::string bound_kind;
  double b_p = 0.05, b_eps = 0.5, b_norm = 1.0, b_pnorm = 1.0;
  std::size_t b_n = 2000, b_m = 64, b_k = 0;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate a closed-form bound");
  bounds_cmd->add_option("which", bound_kind, "moments | jl | det | cap")
      ->required()
      ->check(CLI::IsMember({"moments", "jl", "det", "cap"}));
  bounds_cmd->add_option("--p", b_p, "Bernoulli parameter")->capture_default_str();
  bounds_cmd->add_option("--epsilon", b_eps, "Distortion / exponent epsilon")->capture_default_str();
  bounds_cmd->add_option("--n", b_n, "Projection dimension (jl)")->capture_default_str();
  bounds_cmd->add_option("--m", b_m, "Square size (det)")->capture_default_str();
  bounds_cmd->add_option("--k", b_k, "Cap size (cap)")->capture_default_str();
  bounds_cmd->add_option("--norm", b_norm, "||x||_p (cap)")->capture_default_str();
  bounds_cmd->add_option("--pnorm", b_pnorm, "p of the norm, in (0,2) (cap)")->capture_default_str();

  VerifyArgs vargs;
  auto* verify = app.add_subcommand("verify", "Run a Monte Carlo verification suite");
  verify->add_option("suite", vargs.suite, "entries | invertibility | jl | opnorm | det | cap")
      ->required()
      ->check(CLI::IsMember({"entries", "invertibility", "jl", "opnorm", "det", "cap"}));
  verify->add_option("--p", vargs.p, "Bernoulli parameter")->capture_default_str();
  verify->add_option("--m", vargs.m, "Input dimension / square size (a:b[:step] or list for invertibility)");
  verify->add_option("--n", vargs.n, "Projection dimension(s)");
  verify->add_option("--trials", vargs.trials, "Trials per grid point (default 10000 invertibility, 50 opnorm, 500 det, else 1000)");
  verify->add_option("--epsilon", vargs.epsilon, "epsilon")->capture_default_str();
  verify->add_option("--length", vargs.length, "Vector length (cap)")->capture_default_str();
  verify->add_option("--seed", vargs.seed, "Root seed")->capture_default_str();
  verify->add_option("--workers", vargs.workers, "Threads (1 = serial reference, 0 = all)")->capture_default_str();
  verify->add_option("--min-fraction", vargs.min_fraction, "Also fail any point whose fraction is below this")
      ->check(CLI::Range(0.0, 1.0));
  verify->add_option("--out", vargs.out, "CSV output; a .json summary is written next to it");

  SweepArgs sargs;
  auto* sweep = app.add_subcommand("sweep", "Run a classification parameter sweep");
  sweep->add_option("--dataset", sargs.dataset, "`synth` or a feature CSV path")->capture_default_str();
  sweep->add_option("--grid", sargs.grid, "baseline | p | n | k | noise | single")
      ->check(CLI::IsMember({"baseline", "p", "n", "k", "noise", "single"}))
      ->capture_default_str();
  sweep->add_option("--sigmas", sargs.sigmas, "Noise levels for the noise grid (comma list)");
  sweep->add_option("--table", sargs.table, "Axis of the CSV table (p, n, k, noise)");
  sweep->add_option("--n", sargs.n, "n for --grid single")->capture_default_str();
  sweep->add_option("--p", sargs.p, "p for --grid single")->capture_default_str();
  sweep->add_option("--k", sargs.k, "k for --grid single")->capture_default_str();
  sweep->add_option("--sigma", sargs.sigma, "noise for --grid single")->capture_default_str();
  sweep->add_option("--repeats", sargs.repeats, "Repeats per grid point")->capture_default_str();
  sweep->add_option("--lambda", sargs.lambda, "SVM L2 regularization")->capture_default_str();
  sweep->add_option("--epochs", sargs.epochs, "SVM epochs")->capture_default_str();
  sweep->add_option("--train-fraction", sargs.train_fraction, "Train share of each split")->capture_default_str();
  sweep->add_option("--folds", sargs.folds, "Also report k-fold accuracy (0 = off)")->capture_default_str();
  sweep->add_option("--seed", sargs.seed, "Root seed")->capture_default_str();
  sweep->add_option("--workers", sargs.workers, "Threads (1 = serial reference, 0 = all)")->capture_default_str();
  sweep->add_flag("--timings", sargs.timings, "Record wall-clock training time in the JSON");
  sweep->add_option("--out", sargs.out, "JSON report; the CSV table goes next to it");
  sweep->add_option("--classes", sargs.synth.classes, "synth: classes")->capture_default_str();
  sweep->add_option("--per-class", sargs.synth.per_class, "synth: samples per class")->capture_default_str();
  sweep->add_option("--dim", sargs.synth.dim, "synth: feature dimension")->capture_default_str();
  sweep->add_option("--center-scale", sargs.synth.center_scale, "synth: class center norm")->capture_default_str();
  sweep->add_option("--synth-noise", sargs.synth.noise_sigma, "synth: within-class std")->capture_default_str();
  sweep->add_option("--synth-seed", sargs.synth.seed, "synth: dataset seed")->capture_default_str();

  experiments::DatasetSource synth_src;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic Gaussian-blob feature CSV");
  synth->add_option("--classes", synth_src.classes, "Classes")->capture_default_str();
  synth->add_option("--per-class", synth_src.per_class, "Samples per class")->capture_default_str();
  synth->add_option("--dim", synth_src.dim, "Feature dimension")->capture_default_str();
  synth->add_option("--center-scale", synth_src.center_scale, "Class center norm")->capture_default_str();
  synth->add_option("--noise", synth_src.noise_sigma, "Within-class std")->capture_default_str();
  synth->add_option("--seed", synth_src.seed, "Seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << msg << '\n';
    return kExitInvalid;
  }

  try {
    if (*transform) return run_transform(targs, invocation_line(argc, argv, targs.seed));
    if (*bounds_cmd) {
      if (bound_kind == "moments") {
        const auto mo = bounds::entry_moments(b_p);
        std::printf("mean=%.17g zero_prob=%.17g variance=%.17g\n", mo.mean, mo.zero_prob, mo.variance);
      } else if (bound_kind == "jl") {
        std::printf("%.17g\n", bounds::jl_success_bound({b_eps, b_n, 1, b_p}));
      } else if (bound_kind == "det") {
        std::printf("%.17g\n", bounds::det_lower_threshold(b_m, b_p, b_eps));
      } else {
        std::printf("%.17g\n", bounds::capped_residual_bound(b_norm, b_k, b_pnorm));
      }
      return kExitOk;
    }
    if (*verify) return run_verify(vargs, invocation_line(argc, argv, vargs.seed));
    if (*sweep) return run_sweep(sargs, invocation_line(argc, argv, sargs.seed));
    if (*synth) {
      const auto d = synth_src.load();
      save_csv(d, synth_out, invocation_line(argc, argv, synth_src.seed));
      std::cout << "wrote " << d.size() << " samples of dim " << d.dim() << " to " << synth_out << '\n';
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << msg << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
