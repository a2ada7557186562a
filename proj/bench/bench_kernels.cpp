// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... as usual.

#include <benchmark/benchmark.h>

#include "bioproj/dataset.hpp"
#include "bioproj/mc_verify.hpp"
#include "bioproj/sparse_sign_matrix.hpp"
#include "bioproj/svm.hpp"
#include "bioproj/transform.hpp"

namespace {

using namespace bioproj;

Exec exec_arg(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void BM_SampleMatrix(benchmark::State& state) {
  const Exec exec = exec_arg(state);
  for (auto _ : state) {
    auto m = sample_matrix(2000, 433, 0.05, 1, exec);
    benchmark::DoNotOptimize(m.nnz());
  }
}
BENCHMARK(BM_SampleMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ForwardBatch(benchmark::State& state) {
  const Exec exec = exec_arg(state);
  const Transform t(TransformConfig{433, 2000, 0.05, 200, 1});
  const auto data = synth_blobs(10, 100, 433, 6.0, 1.0, 3);
  for (auto _ : state) {
    auto y = t.forward_batch(data.features, exec);
    benchmark::DoNotOptimize(y.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_ForwardBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_InvertibilityTrials(benchmark::State& state) {
  mc::McConfig cfg;
  cfg.trials = 200;
  cfg.p = 0.05;
  cfg.m_grid = {100};
  cfg.workers = state.range(0) == 0 ? 1 : 0;
  for (auto _ : state) {
    auto r = mc::invertibility_curve(cfg);
    benchmark::DoNotOptimize(r.records.front().estimate);
  }
}
BENCHMARK(BM_InvertibilityTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SvmTrain(benchmark::State& state) {
  const Exec exec = exec_arg(state);
  const auto data = synth_blobs(10, 80, 433, 6.0, 1.0, 3);
  for (auto _ : state) {
    auto model = svm::train(data, svm::TrainSpec{1e-4, 5, 1}, exec);
    benchmark::DoNotOptimize(model.weights.data.data());
  }
}
BENCHMARK(BM_SvmTrain)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
