#include <benchmark/benchmark.h>

#include <cmath>

#include "nicholson/diffmap.hpp"
#include "nicholson/equilibria.hpp"
#include "nicholson/expr.hpp"
#include "nicholson/integrator.hpp"

using namespace nicholson;

namespace {

NicholsonModel example_model() {
    NicholsonModel m;
    m.delta = 0.1;
    m.beta = parse("1 + sin(t)^2");
    m.pairs.push_back({0.06 * std::exp(4.0), 0.8, parse("abs(cos(t))"), parse("abs(cos(t))")});
    m.pairs.push_back({0.04 * std::exp(5.0), 1.0, parse("abs(cos(2*t))"), parse("abs(cos(2*t))")});
    return m;
}

void BM_ExprEval(benchmark::State& state) {
    const auto e = parse("1 + sin(t)^2 * abs(cos(3*t)) / (2 + exp(-t))");
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(e.eval(t));
        t += 1e-3;
    }
}
BENCHMARK(BM_ExprEval);

void BM_Integrate(benchmark::State& state) {
    const auto m = example_model();
    const InitialHistory phi{TimeExpr::constant(1.0)};
    const double T = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(integrate(m, phi, T, 0.01).size());
    state.SetItemsProcessed(state.iterations() * static_cast<long>(T / 0.01));
}
BENCHMARK(BM_Integrate)->Arg(100)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_DelayIntegralSup(benchmark::State& state) {
    const auto m = example_model();
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(delay_integral_sup(m, 5.0, 100.0, 400.0, n).zeta_M);
}
BENCHMARK(BM_DelayIntegralSup)->Arg(2001)->Arg(20001)->Unit(benchmark::kMillisecond);

void BM_CarryingCapacity(benchmark::State& state) {
    const Recruitment f(example_model());
    for (auto _ : state) benchmark::DoNotOptimize(carrying_capacity(f).K);
}
BENCHMARK(BM_CarryingCapacity);

void BM_SchwarzianScan(benchmark::State& state) {
    const Recruitment f(example_model());
    for (auto _ : state) benchmark::DoNotOptimize(scan_schwarzian(f, 0.5, 1e6, 10001).max);
}
BENCHMARK(BM_SchwarzianScan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
