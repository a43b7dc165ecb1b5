#include <benchmark/benchmark.h>

#include "histat/inference.hpp"
#include "histat/specfun.hpp"

using namespace histat;

static void BM_LogGamma(benchmark::State& state) {
  double x = 0.123;
  for (auto _ : state) {
    x += 1.0;
    benchmark::DoNotOptimize(specfun::log_gamma(x));
  }
}
BENCHMARK(BM_LogGamma);

static void BM_LogBinomialExact(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::log_binomial(60, 27));
}
BENCHMARK(BM_LogBinomialExact);

static void BM_LogBinomialLarge(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::log_binomial(1000000, 937));
}
BENCHMARK(BM_LogBinomialLarge);

// the extreme-tail case behind the 1e-42 replication
static void BM_RegIncBetaDeepTail(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(specfun::reg_inc_beta(0.5, 251528.0, 241946.0));
}
BENCHMARK(BM_RegIncBetaDeepTail);

static void BM_RegIncBetaSmall(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::reg_inc_beta(0.3, 7.0, 3.0));
}
BENCHMARK(BM_RegIncBetaSmall);

static void BM_HypergeomTail(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(specfun::hypergeom_tail(85, 17, 17, 12, Tail::GE));
}
BENCHMARK(BM_HypergeomTail);

static void BM_StudentTSf(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::student_t_sf(9.68, 33.0));
}
BENCHMARK(BM_StudentTSf);

static void BM_NormalUpperTailNear(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::normal_upper_tail(1.2649));
}
BENCHMARK(BM_NormalUpperTailNear);

static void BM_NormalUpperTailFar(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::normal_upper_tail(32.0));
}
BENCHMARK(BM_NormalUpperTailFar);

static void BM_FisherIntersection(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(inference::fisher_intersection_test(85, 17, 32, 13, Tail::GE));
}
BENCHMARK(BM_FisherIntersection);
