#include <benchmark/benchmark.h>

#include "dslt/chaos.hpp"
#include "dslt/gaussian_moments.hpp"
#include "dslt/second_moment.hpp"

namespace {

void BM_PairIntegralExact(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  double mu = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dslt::pair_integral_exact(m, 2.0, 2.0, mu));
    mu = (mu > 1.0) ? 0.0 : mu + 1e-6;
  }
}
BENCHMARK(BM_PairIntegralExact)->Arg(1)->Arg(3)->Arg(5)->Arg(10);

void BM_SecondMomentQuadrature(benchmark::State& state) {
  dslt::ModelConfig cfg;
  cfg.H = 2.0 / 3.0;
  cfg.d = 1;
  cfg.k = {1};
  cfg.t = 1.0;
  cfg.epsilon = 1e-3;
  dslt::SecondMomentOptions opt;
  opt.rel_tol = 1e-4;
  opt.max_evals = static_cast<std::size_t>(state.range(0));
  opt.require_convergence = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dslt::second_moment_quadrature(cfg, cfg.epsilon, opt).total.value);
  }
}
BENCHMARK(BM_SecondMomentQuadrature)->Arg(1'000'000)->Arg(4'000'000)->Unit(benchmark::kMillisecond);

void BM_FirstChaosVariance(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dslt::first_chaos_variance(1e-3, 1.0, 2.0 / 3.0, 1e-4, 2'000'000).total.value);
  }
}
BENCHMARK(BM_FirstChaosVariance)->Unit(benchmark::kMillisecond);

}  // namespace
