#include <benchmark/benchmark.h>

#include "skylabel/estimator.hpp"
#include "skylabel/labeler.hpp"
#include "skylabel/propagation.hpp"
#include "skylabel/signal.hpp"
#include "skylabel/solar.hpp"

#include <random>

using namespace skylabel;

static void BM_CombineTwoPath(benchmark::State& state) {
    const CwTone tone{318'450.0, 1.0, 0.0};
    double td = 290e-6;
    for (auto _ : state) {
        const CompositeTone c = combine_two_path(tone, {0.3, td});
        benchmark::DoNotOptimize(c);
        td += 1e-12;
    }
}
BENCHMARK(BM_CombineTwoPath);

static void BM_SolarEvents(benchmark::State& state) {
    const GeoPoint daesan{37.0, 126.35};
    int day = 0;
    for (auto _ : state) {
        const SolarEvents ev =
            solar_events(daesan, shift_date(parse_date("2023-01-01"), day++ % 365));
        benchmark::DoNotOptimize(ev);
    }
}
BENCHMARK(BM_SolarEvents);

static void BM_MskBaseband(benchmark::State& state) {
    const auto bits = random_bits(1, std::size_t(state.range(0)));
    for (auto _ : state) {
        const IqBuffer b = msk_baseband(bits, 200.0, 4000.0);
        benchmark::DoNotOptimize(b.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 20);
}
BENCHMARK(BM_MskBaseband)->Arg(200)->Arg(2000);

static void BM_ApplyTwoPath(benchmark::State& state) {
    IqBuffer buf;
    buf.sample_rate_hz = 4000.0;
    buf.samples.assign(std::size_t(state.range(0)), {0.0, 0.0});
    buf = add_cw_tones(buf, {-450.0, 450.0}, {1.0, 1.0}, {0.0, 0.0});
    for (auto _ : state) {
        const IqBuffer out = apply_two_path(buf, 0.3, 290e-6, 318'000.0);
        benchmark::DoNotOptimize(out.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyTwoPath)->Arg(4000)->Arg(40000);

static void BM_EstimateTone(benchmark::State& state) {
    IqBuffer buf;
    buf.sample_rate_hz = 4000.0;
    buf.samples.assign(4000, {0.0, 0.0});
    buf = add_cw_tones(buf, {-450.0, 450.0}, {1.0, 1.0}, {0.3, -0.7});
    EstimatorConfig cfg;
    for (auto _ : state) {
        const ToneEstimate e = estimate_tone(buf, 450.0, cfg);
        benchmark::DoNotOptimize(e);
    }
    state.SetItemsProcessed(state.iterations() * 4000);
}
BENCHMARK(BM_EstimateTone);

static void BM_PoolStats(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 0.01);
    std::vector<double> pool(std::size_t(state.range(0)));
    for (double& v : pool)
        v = g(rng);
    for (auto _ : state) {
        const DaytimeStats st = pool_stats(pool);
        benchmark::DoNotOptimize(st);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PoolStats)->Arg(1440)->Arg(14400);

static void BM_SynthesizeCampaignDay(benchmark::State& state) {
    SimConfig cfg;
    cfg.seed = 3;
    for (auto _ : state) {
        const CampaignResult r =
            synthesize_campaign(cfg, parse_date("2023-02-11"), 3, int(state.range(0)));
        benchmark::DoNotOptimize(r.truth.data());
    }
}
BENCHMARK(BM_SynthesizeCampaignDay)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
