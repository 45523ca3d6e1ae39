#include <benchmark/benchmark.h>

#include "stainlab/generator.hpp"
#include "stainlab/losses.hpp"
#include "stainlab/metrics.hpp"
#include "stainlab/numeric.hpp"
#include "stainlab/rng.hpp"
#include "stainlab/stain.hpp"

using namespace stainlab;

namespace {

ImageRGB bench_image(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    ImageRGB img(n, n);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.uniform(0.0, 255.999));
    return img;
}

void bm_conv2d_3x3(benchmark::State& state) {
    Rng rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tensor input = rng.uniform_tensor({n, n, 8}, -1.0, 1.0);
    const Tensor kernel = rng.uniform_tensor({3, 3, 8, 8}, -0.3, 0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(conv2d(input, kernel, Padding::same));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}
BENCHMARK(bm_conv2d_3x3)->Arg(32)->Arg(64);

void bm_deconvolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ImageRGB img = bench_image(n, 2);
    const stain::StainMatrix m = stain::StainMatrix::hdab();
    const auto od = stain::rgb_to_od(img);
    for (auto _ : state) benchmark::DoNotOptimize(stain::deconvolve(od, m));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}
BENCHMARK(bm_deconvolve)->Arg(256)->Arg(512);

void bm_fod(benchmark::State& state) {
    Rng rng(3);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tensor dab = rng.uniform_tensor({n, n}, 0.0, stain::kOdCeiling);
    for (auto _ : state)
        benchmark::DoNotOptimize(stain::fod(dab, 1.8, stain::kOdCeiling));
}
BENCHMARK(bm_fod)->Arg(512);

void bm_mlpa_total(benchmark::State& state) {
    Rng rng(4);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tensor a = rng.uniform_tensor({n, n}, 0.0, 2.0);
    const Tensor b = rng.uniform_tensor({n, n}, 0.0, 2.0);
    losses::MLPAConfig cfg;
    cfg.hist_hi = 2.0;
    for (auto _ : state) benchmark::DoNotOptimize(losses::mlpa_total(a, b, cfg));
}
BENCHMARK(bm_mlpa_total)->Arg(256)->Arg(512);

void bm_ssim(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ImageRGB a = bench_image(n, 5);
    const ImageRGB b = bench_image(n, 6);
    for (auto _ : state) benchmark::DoNotOptimize(metrics::ssim(a, b));
}
BENCHMARK(bm_ssim)->Arg(64)->Arg(128);

void bm_cppc(benchmark::State& state) {
    Rng rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tensor f_f = rng.normal_tensor({n, n, 16});
    const Tensor f_r = rng.normal_tensor({n, n, 16});
    Tensor p({n, n, 2}), m({n, n, 2});
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            const double v = rng.uniform(0.1, 0.9);
            p.at(y, x, 0) = v;
            p.at(y, x, 1) = 1.0 - v;
            const bool protein = rng.uniform() < 0.5;
            m.at(y, x, 0) = protein;
            m.at(y, x, 1) = !protein;
        }
    for (auto _ : state)
        benchmark::DoNotOptimize(losses::cppc_loss(f_f, f_r, p, p, m, m));
}
BENCHMARK(bm_cppc)->Arg(32)->Arg(64);

void bm_frechet(benchmark::State& state) {
    Rng rng(8);
    const auto d = static_cast<std::size_t>(state.range(0));
    metrics::FeatureSet a, b;
    a.n = b.n = 256;
    a.d = b.d = d;
    for (std::size_t i = 0; i < a.n * d; ++i) {
        a.values.push_back(rng.normal());
        b.values.push_back(rng.normal() + 0.1);
    }
    for (auto _ : state) benchmark::DoNotOptimize(metrics::frechet_distance(a, b));
}
BENCHMARK(bm_frechet)->Arg(64)->Arg(256);

void bm_generator_forward(benchmark::State& state) {
    gen::GeneratorConfig cfg;
    cfg.n_blocks = 6;
    cfg.channels = 16;
    cfg.embed_dim = 32;
    cfg.seed = 9;
    const gen::GeneratorWeights w = gen::init_weights(cfg);
    const ImageRGB he = bench_image(64, 10);
    const gen::PromptEmbedding prompt =
        gen::fallback_prompt_embedding("HER2", cfg.embed_dim, 11);
    for (auto _ : state)
        benchmark::DoNotOptimize(gen::generate_image(he, prompt, cfg, w));
}
BENCHMARK(bm_generator_forward);

void bm_gp_loss(benchmark::State& state) {
    Rng rng(12);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tensor a = rng.uniform_tensor({n, n, 3}, 0.0, 1.0);
    const Tensor b = rng.uniform_tensor({n, n, 3}, 0.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(losses::gp_loss(a, b, 4, losses::gp_default_lambdas()));
}
BENCHMARK(bm_gp_loss)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
