#include <benchmark/benchmark.h>

#include <random>

#include "gplab/algsem.hpp"
#include "gplab/genpoly.hpp"
#include "gplab/orbitlab.hpp"
#include "gplab/stlie.hpp"
#include "gplab/timesk.hpp"

using namespace gplab;

namespace {

std::map<unsigned, ExactScalar> running_alpha() {
  return {{1, ExactScalar::fraction(1, 3)}, {2, ExactScalar::fraction(1, 5)}, {3, ExactScalar::fraction(1, 7)}};
}

void BM_BuildA(benchmark::State& st) {
  const auto d = IndexSet::running_example();
  const Point x = v_vector(d, running_alpha(), ExactScalar(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_A(d, 2, x));
}
BENCHMARK(BM_BuildA)->Arg(1)->Arg(1000);

void BM_IterateTRational(benchmark::State& st) {
  const auto d = IndexSet::running_example();
  Point x0;
  for (const auto& v : v_vector(d, running_alpha(), ExactScalar(1))) x0.push_back(frac_exact(v));
  for (auto _ : st) benchmark::DoNotOptimize(iterate_T(d, x0, 2, static_cast<std::size_t>(st.range(0))));
}
BENCHMARK(BM_IterateTRational)->Arg(10)->Arg(50);

void BM_IterateTIrrational(benchmark::State& st) {
  const auto d = IndexSet::running_example();
  std::map<unsigned, ExactScalar> alpha{{1, ExactScalar::sqrt(2)}, {2, ExactScalar::sqrt(3)}, {3, ExactScalar::fraction(1, 7)}};
  Point x0;
  for (const auto& v : v_vector(d, alpha, ExactScalar(1))) x0.push_back(frac_exact(v));
  for (auto _ : st) benchmark::DoNotOptimize(iterate_T(d, x0, 2, static_cast<std::size_t>(st.range(0))));
}
BENCHMARK(BM_IterateTIrrational)->Arg(5)->Arg(15);

void BM_IndicatorEval(benchmark::State& st) {
  const GenPoly g = parse_genpoly("frac(n*sqrt(2))*frac(n/3) - 1/5", 1);
  const GenPoly ind = indicator_ge0(g);
  long n = 1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(eval(ind, {ExactScalar(n)}));
    n = n % 200 + 1;
  }
}
BENCHMARK(BM_IndicatorEval);

void BM_ExpLogGraded(benchmark::State& st) {
  const auto d = IndexSet::running_example();
  const auto layout = GradedLayout::of(d);
  Matrix<ExactScalar> z(d.size(), d.size());
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> num(-9, 9);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (layout.precedes(j, i)) z(i, j) = ExactScalar::fraction(num(rng), 7);
  for (auto _ : st) {
    auto a = exp_graded(layout, ExactScalar(3), z);
    benchmark::DoNotOptimize(log_graded(layout, a));
  }
}
BENCHMARK(BM_ExpLogGraded);

void BM_VanishingIdeal(benchmark::State& st) {
  std::vector<PointQ> pts;
  for (long n = 1; n <= st.range(0); ++n) {
    ExactScalar x = frac_exact(ExactScalar(n) * ExactScalar::sqrt(2));
    pts.push_back({x, x * x});
  }
  for (auto _ : st) benchmark::DoNotOptimize(vanishing_ideal(pts, 2));
}
BENCHMARK(BM_VanishingIdeal)->Arg(10)->Arg(40);

void BM_MultiplierSearch(benchmark::State& st) {
  const Polynomial x = Polynomial::variable(0);
  const SemialgebraicSet s{1, {BasicPiece{{}, {x - Polynomial(Rational(1, 100)), Polynomial(Rational(83, 100)) - x}}}};
  const TorusPoint x0{ExactScalar::sqrt(2) - ExactScalar(1)};
  for (auto _ : st) benchmark::DoNotOptimize(multiplier_search_torus(x0, s, 2, 0, 10, st.range(0)));
}
BENCHMARK(BM_MultiplierSearch)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DensityStats(benchmark::State& st) {
  const auto w = DensityWindow::from_predicate(static_cast<std::size_t>(st.range(0)), [](long v) { return v % 7 == 3; });
  for (auto _ : st) benchmark::DoNotOptimize(density_stats(w));
}
BENCHMARK(BM_DensityStats)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
