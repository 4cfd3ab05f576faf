// Serial-vs-OpenMP comparison for the three hot kernels. Run with
//   ./benchmarks/curvelens_bench --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <random>

#include "curvelens/curvature.hpp"
#include "curvelens/projection.hpp"
#include "curvelens/synth.hpp"

using namespace curvelens;

namespace {

SurfaceGrid make_surface(int w, int h) {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SurfaceGrid s(w, h);
    for (std::size_t i = 0; i < s.valid.size(); ++i) {
        s.X[i] = dist(rng);
        s.Y[i] = dist(rng);
        s.Z[i] = 3.0 + 0.1 * dist(rng);
        s.valid[i] = rng() % 17 != 0;
    }
    return s;
}

SceneSpec bench_scene(int factor) {
    SceneSpec scene = builtin_scene("MainScene");
    auto& r = scene.rig;
    r.intrinsics.fx /= factor;
    r.intrinsics.fy /= factor;
    r.intrinsics.cx /= factor;
    r.intrinsics.cy /= factor;
    r.width /= factor;
    r.height /= factor;
    return scene;
}

}  // namespace

static void BM_SmoothSerial(benchmark::State& state) {
    const SurfaceGrid s = make_surface(static_cast<int>(state.range(0)),
                                       static_cast<int>(state.range(0)) * 2 / 3);
    for (auto _ : state) benchmark::DoNotOptimize(smooth_surface_serial(s, {2.0, 3}));
}
BENCHMARK(BM_SmoothSerial)->Arg(512)->Arg(1024);

static void BM_SmoothParallel(benchmark::State& state) {
    const SurfaceGrid s = make_surface(static_cast<int>(state.range(0)),
                                       static_cast<int>(state.range(0)) * 2 / 3);
    for (auto _ : state) benchmark::DoNotOptimize(smooth_surface(s, {2.0, 3}));
}
BENCHMARK(BM_SmoothParallel)->Arg(512)->Arg(1024);

static void BM_CurvatureSerial(benchmark::State& state) {
    const SurfaceGrid s = make_surface(static_cast<int>(state.range(0)),
                                       static_cast<int>(state.range(0)) * 2 / 3);
    for (auto _ : state) benchmark::DoNotOptimize(curvature_field_serial(s));
}
BENCHMARK(BM_CurvatureSerial)->Arg(512)->Arg(1024);

static void BM_CurvatureParallel(benchmark::State& state) {
    const SurfaceGrid s = make_surface(static_cast<int>(state.range(0)),
                                       static_cast<int>(state.range(0)) * 2 / 3);
    for (auto _ : state) benchmark::DoNotOptimize(curvature_field(s));
}
BENCHMARK(BM_CurvatureParallel)->Arg(512)->Arg(1024);

static void BM_RenderSerial(benchmark::State& state) {
    const SceneSpec scene = bench_scene(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(render_depth_serial(scene, WhichCamera::left));
}
BENCHMARK(BM_RenderSerial)->Arg(8)->Arg(4);

static void BM_RenderParallel(benchmark::State& state) {
    const SceneSpec scene = bench_scene(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(render_depth(scene, WhichCamera::left));
}
BENCHMARK(BM_RenderParallel)->Arg(8)->Arg(4);

BENCHMARK_MAIN();
