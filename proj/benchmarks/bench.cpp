#include <benchmark/benchmark.h>

#include "tscal/calculus.hpp"
#include "tscal/shift.hpp"
#include "tscal/solver.hpp"

#include <cmath>

namespace {

tscal::VectorField alternating_field(double q) {
    const double lq = std::log(q);
    tscal::VectorField f;
    f.dimension = 1;
    f.bound = 2.0;
    f.lipschitz = 1.0;
    f.eval = [lq](double t, const tscal::Vec& x) -> tscal::Vec {
        const long k = std::lround(-std::log1p(-t) / lq);
        return {(k % 2 == 0) ? x[0] : -x[0]};
    };
    return f;
}

void BM_DeltaIntegralGeometric(benchmark::State& state) {
    const auto ts = tscal::TimeScale::geometric(2.0, 48);
    const auto f = tscal::GridFunction::scalar([](double t) { return 1.0 - t; });
    const double hi = ts.floor_point(1.0, true);
    for (auto _ : state)
        benchmark::DoNotOptimize(tscal::delta_integral(ts, f, 0.0, hi));
}
BENCHMARK(BM_DeltaIntegralGeometric);

void BM_ExpFunctionMixedScale(benchmark::State& state) {
    const auto ts = tscal::TimeScale(
        {tscal::UniformGrid{0.0, 0.25, 5}, tscal::ContinuousInterval{2.0, 3.0}});
    const auto p = tscal::GridFunction::scalar([](double) { return 0.4; });
    for (auto _ : state)
        benchmark::DoNotOptimize(tscal::exp_function(ts, p, 3.0, 0.0));
}
BENCHMARK(BM_ExpFunctionMixedScale);

void BM_SolveOriginal(benchmark::State& state) {
    const auto ts = tscal::TimeScale::geometric(2.0, 48);
    const auto field = alternating_field(2.0);
    const auto sys = tscal::DynamicSystem::from_field(field, 0.005, 0.0, {1.0});
    const double horizon = tscal::horizon_for(0.005, 1.0, ts, 0.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(tscal::solve(sys, ts, horizon));
}
BENCHMARK(BM_SolveOriginal);

void BM_AveragedFieldEval(benchmark::State& state) {
    const auto ts = tscal::TimeScale::geometric(2.0, 48);
    const auto op = tscal::ShiftOperator::geometric(2.0);
    auto field = alternating_field(2.0);
    const tscal::SampleWindow w{0.0, ts.sup(), 64};
    field.certificate = tscal::verify_quasiperiodic(ts, op, field.at({1.0}), 2.0, w);
    const auto avg = tscal::build_averaged_field_quasiperiodic(
        field, ts, op, 2.0, 0.0, field.certificate->gamma, 16);
    double t = 0.4;
    tscal::Vec x{1.2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(avg.value(t, x));
        x[0] += 1e-9; // defeat the base-integral cache
    }
}
BENCHMARK(BM_AveragedFieldEval);

} // namespace

BENCHMARK_MAIN();
