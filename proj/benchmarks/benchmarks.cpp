#include <benchmark/benchmark.h>

#include <random>

#include "swcrack/calibration.hpp"
#include "swcrack/components.hpp"
#include "swcrack/metrics.hpp"
#include "swcrack/morphology.hpp"
#include "swcrack/synth.hpp"

using namespace swcrack;

namespace {

BinaryMask crack_mask_448() {
    SynthConfig cfg;
    cfg.width = 448;
    cfg.height = 448;
    cfg.walk_steps = 400;
    cfg.walk_count = 4;
    cfg.seed = 1;
    return generate_crack_mask(cfg);
}

BinaryMask noise_mask_448(double density) {
    std::mt19937_64 rng(2);
    BinaryMask mask(448, 448);
    std::bernoulli_distribution coin(density);
    for (auto& px : mask.data) px = coin(rng) ? 1 : 0;
    return mask;
}

}  // namespace

static void BM_Dilate(benchmark::State& state) {
    BinaryMask mask = crack_mask_448();
    int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(dilate(mask, k));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(mask.pixel_count()));
}
BENCHMARK(BM_Dilate)->Arg(3)->Arg(5)->Arg(8);

static void BM_SwChain(benchmark::State& state) {
    BinaryMask mask = crack_mask_448();
    for (auto _ : state) benchmark::DoNotOptimize(sw_chain(mask));
}
BENCHMARK(BM_SwChain);

static void BM_Count(benchmark::State& state) {
    BinaryMask mask = noise_mask_448(static_cast<double>(state.range(0)) / 100.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count(mask, Connectivity::eight));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(mask.pixel_count()));
}
BENCHMARK(BM_Count)->Arg(10)->Arg(50);

static void BM_Label(benchmark::State& state) {
    BinaryMask mask = noise_mask_448(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(label(mask, Connectivity::eight));
}
BENCHMARK(BM_Label);

static void BM_PerImageThreshold(benchmark::State& state) {
    SynthConfig cfg;
    cfg.width = static_cast<int>(state.range(0));
    cfg.height = static_cast<int>(state.range(0));
    cfg.walk_steps = 4 * cfg.width / 3;
    cfg.walk_count = 3;
    cfg.seed = 3;
    ProbabilityMap map = corrupt_to_probmap(dilate(generate_crack_mask(cfg), 3), cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(per_image_threshold(map, Connectivity::eight));
}
BENCHMARK(BM_PerImageThreshold)->Arg(128)->Arg(448);

static void BM_Confusion(benchmark::State& state) {
    BinaryMask pred = noise_mask_448(0.3);
    BinaryMask gt = crack_mask_448();
    for (auto _ : state) benchmark::DoNotOptimize(confusion(pred, gt));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(gt.pixel_count()));
}
BENCHMARK(BM_Confusion);

BENCHMARK_MAIN();
