// Serial reference kernels against their OpenMP counterparts, and whole
// apply() calls, on synthetic arm sweeps of growing length.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "trajtalk/apply/apply.hpp"
#include "trajtalk/apply/kernels.hpp"

using namespace trajtalk;

namespace {

// A helix passing the landmarks below, so every source acts on some waypoints.
std::vector<Waypoint> sweep(std::size_t n) {
    std::vector<Waypoint> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        w[i] = {s * 10.0, {0.2 + 0.3 * s, 0.1 * std::sin(12 * s), 0.3 + 0.05 * std::cos(12 * s)}, 0.02 + 0.01 * s, 2.0};
    }
    return w;
}

const LandmarkSet& landmarks() {
    static const LandmarkSet lms({{"left wrist", {0.25, 0.05, 0.3}},
                                  {"left elbow", {0.35, -0.05, 0.32}},
                                  {"mouth", {0.45, 0.02, 0.35}}});
    return lms;
}

const std::vector<PointSource> kAttract = {{{0.25, 0.05, 0.3}, 2.0}, {{0.45, 0.02, 0.35}, 3.0}};
const std::vector<PointSource> kRepulse = {{{0.35, -0.05, 0.32}, 0.5}};
const std::vector<LocalScale> kScales = {{{0.25, 0.05, 0.3}, 0.5, std::nullopt}, {{0.45, 0.02, 0.35}, 2.0, 0.5}};

template <auto Kernel>
void BM_displace(benchmark::State& state) {
    const auto base = sweep(static_cast<std::size_t>(state.range(0)));
    const ApplyParams params;
    for (auto _ : state) {
        auto w = base;
        Kernel(w, kAttract, kRepulse, params);
        benchmark::DoNotOptimize(w.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_scale_local(benchmark::State& state) {
    const auto base = sweep(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto w = base;
        Kernel(w, kScales, 0.07);
        benchmark::DoNotOptimize(w.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution Exec>
void BM_apply(benchmark::State& state) {
    const Trajectory traj(sweep(static_cast<std::size_t>(state.range(0))));
    ModificationSpec spec;
    spec.global.velocity = Multiplier(1.5);
    spec.landmarks["left wrist"].attract = Multiplier(2.0);
    spec.landmarks["left elbow"].attract = Multiplier(0.5);
    spec.landmarks["mouth"].velocity = Multiplier(0.5);
    const ApplyParams params;
    for (auto _ : state) benchmark::DoNotOptimize(apply(traj, spec, landmarks(), params, Exec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
    for (long n : {64L, 512L, 4096L, 32768L, 262144L}) b->Arg(n);
}

}  // namespace

BENCHMARK(BM_displace<kernels::serial::displace>)->Name("displace/serial")->Apply(sizes);
BENCHMARK(BM_displace<kernels::parallel::displace>)->Name("displace/parallel")->Apply(sizes)->UseRealTime();
BENCHMARK(BM_scale_local<kernels::serial::scale_local>)->Name("scale_local/serial")->Apply(sizes);
BENCHMARK(BM_scale_local<kernels::parallel::scale_local>)->Name("scale_local/parallel")->Apply(sizes)->UseRealTime();
BENCHMARK(BM_apply<Execution::serial>)->Name("apply/serial")->Apply(sizes);
BENCHMARK(BM_apply<Execution::parallel>)->Name("apply/parallel")->Apply(sizes)->UseRealTime();

BENCHMARK_MAIN();
