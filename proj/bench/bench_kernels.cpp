// Serial reference against the blocked/OpenMP radial kernel.
#include <benchmark/benchmark.h>

#include <vector>

#include "vslicer/kernels.hpp"
#include "vslicer/polytope.hpp"
#include "vslicer/sampling.hpp"

using namespace vslicer;

namespace {

struct Fixture {
    HalfspaceList list;
    std::vector<double> rays;
    std::size_t count;
};

Fixture make(int d, std::size_t n, std::size_t count) {
    RandomStream r(1);
    Fixture f{sphere_list(d, n, r), {}, count};
    for (std::size_t k = 0; k < count; ++k) {
        const RealVec u = sample_sphere(d, r);
        f.rays.insert(f.rays.end(), u.begin(), u.end());
    }
    return f;
}

void BM_extents_serial(benchmark::State& state) {
    const Fixture f = make(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)), 256);
    std::vector<double> out(f.count);
    for (auto _ : state) {
        kernels::log2_extents_serial(f.list, f.rays, f.count, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.count * f.list.size()));
}

void BM_extents_blocked(benchmark::State& state) {
    const Fixture f = make(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)), 256);
    const kernels::RadialKernel kernel(f.list);
    std::vector<double> out(f.count);
    for (auto _ : state) {
        kernel.log2_extents(f.rays, f.count, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.count * f.list.size()));
}

void BM_volume(benchmark::State& state, Backend backend) {
    RandomStream r(2);
    const HalfspaceList l = sphere_list(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)), r);
    const VolumeOptions opts{backend, 0};
    for (auto _ : state) {
        const VolumeEstimate e = estimate_volume(l, 4096, RandomStream(3), opts);
        benchmark::DoNotOptimize(e.log2_ratio_per_dim);
    }
    state.SetItemsProcessed(state.iterations() * 4096 * static_cast<std::int64_t>(l.size()));
}

}  // namespace

BENCHMARK(BM_extents_serial)->Args({12, 256})->Args({18, 4096})->Args({24, 16384});
BENCHMARK(BM_extents_blocked)->Args({12, 256})->Args({18, 4096})->Args({24, 16384});
BENCHMARK_CAPTURE(BM_volume, serial_reference, Backend::serial_reference)->Args({16, 2048})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_volume, parallel, Backend::parallel)->Args({16, 2048})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
