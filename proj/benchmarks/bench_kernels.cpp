#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "dslt/kernels.hpp"

namespace {

void BM_KernelDerivative(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const dslt::MollifiedKernel kernel(1e-3, {order});
  double x = 0.013;
  for (auto _ : state) {
    const std::array<double, 1> xs{x};
    benchmark::DoNotOptimize(kernel(xs));
    x += 1e-6;
  }
}
BENCHMARK(BM_KernelDerivative)->Arg(0)->Arg(1)->Arg(4)->Arg(8);

void BM_KernelDerivative3d(benchmark::State& state) {
  const dslt::MollifiedKernel kernel(1e-2, {1, 2, 0});
  double x = 0.013;
  for (auto _ : state) {
    const std::array<double, 3> xs{x, -x, 0.5 * x};
    benchmark::DoNotOptimize(kernel(xs));
    x += 1e-6;
  }
}
BENCHMARK(BM_KernelDerivative3d);

}  // namespace
