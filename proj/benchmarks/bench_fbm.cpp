#include <benchmark/benchmark.h>

#include <vector>

#include "dslt/estimator.hpp"
#include "dslt/fbm.hpp"

namespace {

void BM_SamplePathCirculant(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const dslt::FbmSampler sampler(0.7, n, 1.0 / n, dslt::SamplerMethod::Circulant);
  std::vector<double> out(n + 1);
  std::uint64_t idx = 0;
  for (auto _ : state) {
    sampler.sample_path(42, idx++, 1, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SamplePathCirculant)->Arg(256)->Arg(1024)->Arg(4096);

void BM_SamplePathCholesky(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const dslt::FbmSampler sampler(0.7, n, 1.0 / n, dslt::SamplerMethod::Cholesky);
  std::vector<double> out(n + 1);
  std::uint64_t idx = 0;
  for (auto _ : state) {
    sampler.sample_path(42, idx++, 1, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SamplePathCholesky)->Arg(256)->Arg(1024);

void BM_DsltPathwise(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  dslt::ModelConfig cfg;
  cfg.H = 2.0 / 3.0;
  cfg.d = 1;
  cfg.k = {1};
  cfg.t = 1.0;
  cfg.epsilon = 1e-3;
  const dslt::PathBatch batch = dslt::sample_paths(cfg, n, 1, 7);
  const std::vector<double> y{0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dslt::dslt_pathwise(batch, 0, cfg, y).value);
  }
  state.SetItemsProcessed(state.iterations() * (static_cast<std::int64_t>(n) * (n - 1) / 2));
}
BENCHMARK(BM_DsltPathwise)->Arg(256)->Arg(1024)->Arg(2048);

}  // namespace
