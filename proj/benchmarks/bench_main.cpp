#include <benchmark/benchmark.h>

#include "fprmt/fieldsim.hpp"
#include "fprmt/linalg.hpp"

namespace {

fprmt::DenseMatrix sample_matrix(int n, int depth) {
  fprmt::Stream s(1, 0);
  return fprmt::product_chain(fprmt::ModelSpec::standard(depth, n, std::vector<int>(depth - 1, 0)), s);
}

void BM_LogAbsDet(benchmark::State& state) {
  const auto x = sample_matrix(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fprmt::log_abs_det_shift(x, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LogAbsDet)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

void BM_EigenSplit(benchmark::State& state) {
  const auto x = sample_matrix(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fprmt::eigen_split(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigenSplit)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

void BM_ProductChain(benchmark::State& state) {
  const auto spec = fprmt::ModelSpec::standard(static_cast<int>(state.range(1)), static_cast<int>(state.range(0)),
                                               std::vector<int>(state.range(1) - 1, 0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    fprmt::Stream s(2, i++);
    benchmark::DoNotOptimize(fprmt::product_chain(spec, s));
  }
}
BENCHMARK(BM_ProductChain)->ArgsProduct({{10, 50}, {1, 2, 3}});

void BM_FieldSample(benchmark::State& state) {
  const double sigma = static_cast<double>(state.range(0));
  const fprmt::field::FieldSampler sampler({fprmt::field::KernelFamily::kSquaredExponential, sigma},
                                           fprmt::field::kDefaultHalfWidth, fprmt::field::default_spacing(sigma));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fprmt::field::count_fixed_points_1d(sampler.sample(3, i++)));
}
BENCHMARK(BM_FieldSample)->Arg(1)->Arg(2)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
