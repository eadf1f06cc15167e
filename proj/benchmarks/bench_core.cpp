#include "cbound/cboundary.hpp"
#include "cbound/confmap.hpp"
#include "cbound/gridoracle.hpp"
#include "cbound/jmap.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cbound;

static void BM_IntegrateWedgeCurve(benchmark::State& st) {
    const auto g = ConeField::strain();
    for (auto _ : st) benchmark::DoNotOptimize(integrate_null(g, Family::X, {-1.0, -0.75}, IntegrationWindow{}));
}
BENCHMARK(BM_IntegrateWedgeCurve)->Unit(benchmark::kMillisecond);

static void BM_IntegrateExactLine(benchmark::State& st) {
    const auto g = ConeField::strain();
    for (auto _ : st) benchmark::DoNotOptimize(integrate_null(g, Family::X, {-1.0, -1.0}, IntegrationWindow{}));
}
BENCHMARK(BM_IntegrateExactLine)->Unit(benchmark::kMicrosecond);

static void BM_ChronRel(benchmark::State& st) {
    const auto g = ConeField::strain();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> t(-3, 3), x(-3, -0.05);
    std::vector<std::pair<Point, Point>> pairs;
    for (int i = 0; i < 256; ++i) pairs.emplace_back(Point(t(rng), x(rng)), Point(t(rng), x(rng)));
    std::size_t k = 0;
    for (auto _ : st) {
        const auto& [p, q] = pairs[k++ % pairs.size()];
        benchmark::DoNotOptimize(chron_rel(g, p, q));
    }
}
BENCHMARK(BM_ChronRel)->Unit(benchmark::kMicrosecond);

static void BM_BuildOracle(benchmark::State& st) {
    const auto g = ConeField::strain();
    const double h = 1.0 / static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(build_oracle(g, BBox{-3, 3, -3, -0.05}, h));
}
BENCHMARK(BM_BuildOracle)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_StrainAtlas(benchmark::State& st) {
    const auto g = ConeField::strain();
    std::vector<double> seeds;
    for (int k = 0; k <= 16; ++k) seeds.push_back(-1.0 + k / 32.0);
    for (double t : {-2.0, 0.0, 1.0}) seeds.push_back(t);
    for (auto _ : st) benchmark::DoNotOptimize(build_atlas(g, seeds, {}));
}
BENCHMARK(BM_StrainAtlas)->Unit(benchmark::kMillisecond);

static void BM_ExtChronWitness(benchmark::State& st) {
    const auto cc = ConeField::minkowski();
    const auto a = tip_generate(cc, -2.0), b = tip_generate(cc, -1.0);
    for (auto _ : st) benchmark::DoNotOptimize(ext_chron(cc, a, b));
}
BENCHMARK(BM_ExtChronWitness)->Unit(benchmark::kMillisecond);

static void BM_Jhat(benchmark::State& st) {
    const auto cc = ConeField::minkowski(), g = ConeField::strain();
    const auto P = tip_generate(cc, -1.3);
    for (auto _ : st) benchmark::DoNotOptimize(jhat(cc, g, P));
}
BENCHMARK(BM_Jhat)->Unit(benchmark::kMillisecond);

static void BM_MapWedgePoint(benchmark::State& st) {
    const auto g = ConeField::strain();
    for (auto _ : st) benchmark::DoNotOptimize(map_f(g, Point(-0.75, -1.0)));
}
BENCHMARK(BM_MapWedgePoint)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
