#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kfn/interp.hpp"
#include "kfn/ksolve.hpp"

namespace {

kfn::Vector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return kfn::Vector(std::move(v));
}

void BM_KClip(benchmark::State& state) {
  const kfn::Vector a = random_vector(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kfn::k_clip(a, 0.01).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KClip)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity();

void BM_KLip(benchmark::State& state) {
  const kfn::GridFunction f(0.0, 1.0, random_vector(static_cast<std::size_t>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(kfn::k_lip(f, 0.01).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KLip)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity();

void BM_KNumeric(benchmark::State& state) {
  const kfn::Vector x = random_vector(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kfn::k_numeric(x, 0.3, 2.0, 1.0, 1e-10).value);
}
BENCHMARK(BM_KNumeric)->RangeMultiplier(8)->Range(8, 4096);

void BM_KBruteForce(benchmark::State& state) {
  const kfn::Vector x = random_vector(static_cast<std::size_t>(state.range(0)), 4);
  const kfn::CoupleSpec c = kfn::CoupleSpec::clip();
  for (auto _ : state) benchmark::DoNotOptimize(kfn::k_bruteforce(x, 0.5, c, 1e-3).value);
}
BENCHMARK(BM_KBruteForce)->DenseRange(1, 3);

void BM_InterpNorm(benchmark::State& state) {
  std::vector<double> w(32);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = static_cast<double>(1ull << k);
  const kfn::CoupleSpec c = kfn::CoupleSpec::weighted(kfn::Vector(std::move(w)));
  const kfn::Element x = random_vector(32, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kfn::discrete_interp_norm(x, c, {0.6, 2.0}, static_cast<int>(state.range(0))).value);
  }
}
BENCHMARK(BM_InterpNorm)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
