#include <benchmark/benchmark.h>

#include <numbers>

#include "ribau/demoulin.hpp"

namespace {

using namespace ribau;

const ChartSpec kTorus = ChartSpec::clifford_torus(std::numbers::sqrt2 / 2.0);

void BM_Transform(benchmark::State& state) {
  const auto frame = eval_chart(kTorus, {0.9, 2.4});
  const Jet<2> tau = evaluate_jet(parse_expr("0.3*sin(u)"), 0.9, 2.4);
  for (auto _ : state) benchmark::DoNotOptimize(transform(frame, tau));
}
BENCHMARK(BM_Transform);

void BM_AnalyzePoint(benchmark::State& state) {
  const auto frame = eval_chart(kTorus, {0.9, 2.4});
  const Jet<2> tau = evaluate_jet(parse_expr("0.2*sin(u)+0.1*cos(v)"), 0.9, 2.4);
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(analyze_point(frame, tau, tol));
}
BENCHMARK(BM_AnalyzePoint);

void BM_Sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid grid(Domain::torus(), n, n);
  const TauSampler tau = tau_sampler(parse_expr("0.3*sin(u)"));
  for (auto _ : state) benchmark::DoNotOptimize(sweep(kTorus, tau, grid));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Sweep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Potential(benchmark::State& state) {
  const Grid grid(Domain::torus(), 128, 128);
  const OneForm alpha = sweep(kTorus, tau_sampler(parse_expr("0.3*sin(u)")), grid).alpha_form();
  for (auto _ : state) benchmark::DoNotOptimize(integrate_potential(alpha));
}
BENCHMARK(BM_Potential)->Unit(benchmark::kMillisecond);

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_expr("0.2*sin(u)+0.1*cos(v)*exp(-u^2/4)"));
}
BENCHMARK(BM_Parse);

}  // namespace

BENCHMARK_MAIN();
