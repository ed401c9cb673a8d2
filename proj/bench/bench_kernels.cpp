// Serial reference vs OpenMP enumeration kernels on a mid-size instance:
// |Z| = 4, n = 7 (16384 datasets), |W| = 6.

#include <benchmark/benchmark.h>

#include "genbound/info.hpp"
#include "genbound/montecarlo.hpp"
#include "genbound/problems.hpp"
#include "genbound/reference.hpp"
#include "genbound/risk.hpp"
#include "genbound/rng.hpp"

namespace {

using namespace genbound;

struct BenchProblem {
  FiniteDistribution mu = random_distribution(404, 1, 4);
  StochasticKernel kernel = random_kernel(404, 2, 16384, 6);
  LossTable loss = make_loss();
  std::size_t n = 7;

  static LossTable make_loss() {
    CounterRng rng(404, 3, 0);
    std::vector<std::int64_t> nums(6 * 4);
    for (auto& v : nums) v = static_cast<std::int64_t>(rng.next_u64() % 1001);
    return LossTable(6, 4, std::move(nums), 1000, 0.0, 1.0);
  }
};

const BenchProblem& problem() {
  static const BenchProblem instance;
  return instance;
}

void BM_io_mi_serial(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::io_mutual_information(p.mu, p.n, p.kernel));
  }
}
BENCHMARK(BM_io_mi_serial)->Unit(benchmark::kMillisecond);

void BM_io_mi_parallel(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(io_mutual_information(p.mu, p.n, p.kernel));
  }
}
BENCHMARK(BM_io_mi_parallel)->Unit(benchmark::kMillisecond);

void BM_risk_summary_serial(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::exact_risk_summary(p.mu, p.n, p.kernel, p.loss));
  }
}
BENCHMARK(BM_risk_summary_serial)->Unit(benchmark::kMillisecond);

void BM_risk_summary_parallel(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_risk_summary(p.mu, p.n, p.kernel, p.loss));
  }
}
BENCHMARK(BM_risk_summary_parallel)->Unit(benchmark::kMillisecond);

void BM_estimate_gen_serial(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::estimate_gen(p.mu, p.n, p.kernel, p.loss, 200000, 1));
  }
}
BENCHMARK(BM_estimate_gen_serial)->Unit(benchmark::kMillisecond);

void BM_estimate_gen_parallel(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_gen(p.mu, p.n, p.kernel, p.loss, 200000, 1));
  }
}
BENCHMARK(BM_estimate_gen_parallel)->Unit(benchmark::kMillisecond);

void BM_lambda_mi(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lambda_mutual_information(p.mu, p.n, p.kernel, p.loss));
  }
}
BENCHMARK(BM_lambda_mi)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
