#include <benchmark/benchmark.h>

#include "kisram/artin_schreier.hpp"
#include "kisram/module_io.hpp"
#include "kisram/points.hpp"

namespace {

using namespace kisram;

PuiseuxSeries dense_series(const FieldPtr& F, int terms, long den) {
  std::vector<Term> t;
  for (int k = 0; k < terms; ++k) t.push_back({Rational(k, den), F->from_integer(k % 7 + 1)});
  return PuiseuxSeries::from_terms(F, std::move(t), ExtRational(Rational(terms, den)));
}

void BM_SeriesMul(benchmark::State& state) {
  const FieldPtr F = finite_field(3, 2);
  const PuiseuxSeries a = dense_series(F, static_cast<int>(state.range(0)), 4);
  const PuiseuxSeries b = dense_series(F, static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_SeriesMul)->Arg(16)->Arg(64)->Arg(256);

void BM_SeriesInverse(benchmark::State& state) {
  const FieldPtr F = finite_field(5, 1);
  const PuiseuxSeries a = dense_series(F, 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(a.inverse(ExtRational(Rational(state.range(0)))));
}
BENCHMARK(BM_SeriesInverse)->Arg(5)->Arg(20);

void BM_ASRoots(benchmark::State& state) {
  const FieldPtr F = finite_field(3, 1);
  const PuiseuxSeries a = PuiseuxSeries::monomial(F, 1, Rational(1, 4)) + PuiseuxSeries::monomial(F, 2, Rational(3));
  const PuiseuxSeries b = PuiseuxSeries::monomial(F, 1, Rational(2, 3));
  for (auto _ : state) benchmark::DoNotOptimize(as_roots(a, b, ExtRational(Rational(state.range(0)))));
}
BENCHMARK(BM_ASRoots)->Arg(5)->Arg(20);

void BM_WittMul(benchmark::State& state) {
  const std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
  const FieldPtr F = finite_field(3, 1);
  const auto table = witt_table(3, n);
  std::vector<PuiseuxSeries> xs, ys;
  for (std::uint32_t j = 0; j < n; ++j) {
    xs.push_back(dense_series(F, 6, 2).shifted(Rational(j + 1)));
    ys.push_back(dense_series(F, 6, 3).shifted(Rational(j + 1, 2)));
  }
  const WittVector x(table, xs), y(table, ys);
  for (auto _ : state) benchmark::DoNotOptimize(witt_mul(x, y));
}
BENCHMARK(BM_WittMul)->DenseRange(1, 3);

void BM_Enumerate(benchmark::State& state, const char* text) {
  const ModuleFile mf = parse_module_text(text);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_points(mf.module));
}
BENCHMARK_CAPTURE(BM_Enumerate, rank2_w14,
                  "[module]\np = 3\ne = 4\nd = 1\nprepared = true\nmatrix = [[u, 1], [u^4, 0]]\n")
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Enumerate, mu_25_plus_z_25,
                  "[module]\np = 5\ne = 2\nn = 2\nd = 1\nprepared = true\nmatrix = [[1, 0], [0, u^2 + 5]]\n")
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
