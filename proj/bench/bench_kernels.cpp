// Serial reference kernels against their OpenMP counterparts on the direct
// constructions. Run: ./build/bench/qpack_bench
#include <benchmark/benchmark.h>

#include <map>

#include "qpack/construct.hpp"
#include "qpack/ingredients.hpp"
#include "qpack/verify.hpp"

namespace {

const qpack::PackingDesign& design(std::uint32_t n) {
  static std::map<std::uint32_t, qpack::PackingDesign> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, qpack::build_mpqs(n, qpack::builtin_ingredients()).design).first;
  return it->second;
}

void BM_CheckPackingSerial(benchmark::State& state) {
  const auto& d = design(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qpack::check_packing_serial(d));
}

void BM_CheckPackingParallel(benchmark::State& state) {
  const auto& d = design(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qpack::check_packing(d));
}

void BM_LeaveSerial(benchmark::State& state) {
  const auto& d = design(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qpack::compute_leave_serial(d));
}

void BM_LeaveParallel(benchmark::State& state) {
  const auto& d = design(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qpack::compute_leave(d));
}

}  // namespace

BENCHMARK(BM_CheckPackingSerial)->Arg(23)->Arg(47)->Arg(71)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckPackingParallel)->Arg(23)->Arg(47)->Arg(71)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LeaveSerial)->Arg(23)->Arg(47)->Arg(71)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LeaveParallel)->Arg(23)->Arg(47)->Arg(71)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
