#include <benchmark/benchmark.h>

#include "lfsal/detector.hpp"
#include "lfsal/fee.hpp"
#include "lfsal/layers.hpp"
#include "lfsal/lightfield.hpp"
#include "lfsal/loss.hpp"
#include "lfsal/metrics.hpp"
#include "lfsal/pipeline.hpp"
#include "lfsal/rng.hpp"

namespace {

using namespace lfsal;

Tensor random_tensor(std::vector<std::size_t> shape, std::uint64_t seed) {
    Tensor t = Tensor::zeros(std::move(shape));
    Rng rng(seed);
    for (double& v : t.data) v = rng.uniform();
    return t;
}

LightField random_field(std::size_t u, std::size_t v, std::size_t s, std::size_t t,
                        std::uint64_t seed) {
    LightField lf;
    lf.ang_u = u;
    lf.ang_v = v;
    lf.spat_s = s;
    lf.spat_t = t;
    Rng rng(seed);
    for (std::size_t i = 0; i < u * v; ++i) {
        Tensor view = Tensor::zeros({3, t, s});
        for (double& x : view.data) x = rng.uniform();
        lf.views.push_back(std::move(view));
    }
    return lf;
}

ConvLayer seeded_conv(ConvLayerSpec spec, std::uint64_t seed) {
    ConvLayer l = make_conv_layer(spec);
    Rng rng(seed);
    for (double& v : l.weight.data) v = rng.uniform(-0.1, 0.1);
    for (double& v : l.bias.data) v = rng.uniform(-0.1, 0.1);
    return l;
}

void bm_conv_same3x3(benchmark::State& state) {
    const std::size_t ch = static_cast<std::size_t>(state.range(0));
    const std::size_t hw = static_cast<std::size_t>(state.range(1));
    const ConvLayer l =
        seeded_conv({ch, ch, 3, 3, 1, 1, 1, 1, Padding::Same, Activation::Relu}, 1);
    const Tensor in = random_tensor({ch, hw, hw}, 2);
    for (auto _ : state) {
        Tensor out = conv2d_forward(l, in);
        benchmark::DoNotOptimize(out.data.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(ch * ch * 9 * hw * hw));
}
BENCHMARK(bm_conv_same3x3)->Args({16, 64})->Args({32, 64})->Args({64, 32});

void bm_conv_lens_blocks(benchmark::State& state) {
    // 9x9 kernel, stride 9, valid: one output column per lens block.
    const ConvLayer l =
        seeded_conv({128, 3, 9, 9, 9, 9, 1, 1, Padding::Valid, Activation::Relu}, 3);
    const Tensor in = random_tensor({3, 288, 288}, 4);
    for (auto _ : state) {
        Tensor out = conv2d_forward(l, in);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(bm_conv_lens_blocks);

void bm_conv_dilated(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const ConvLayer l =
        seeded_conv({32, 32, 3, 3, 1, 1, d, d, Padding::Same, Activation::Relu}, 5);
    const Tensor in = random_tensor({32, 32, 32}, 6);
    for (auto _ : state) {
        Tensor out = conv2d_forward(l, in);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(bm_conv_dilated)->Arg(3)->Arg(5)->Arg(7);

void bm_maxpool(benchmark::State& state) {
    const Tensor in = random_tensor({32, 128, 128}, 7);
    for (auto _ : state) {
        PoolCache cache;
        Tensor out = maxpool2x2_forward(in, cache);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(bm_maxpool);

void bm_upsample(benchmark::State& state) {
    const Tensor in = random_tensor({32, 32, 32}, 8);
    for (auto _ : state) {
        Tensor out = upsample_bilinear(in, 128, 128);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(bm_upsample);

void bm_pack_unpack(benchmark::State& state) {
    const LightField lf = random_field(9, 9, 32, 32, 9);
    for (auto _ : state) {
        const MicroLensImage mla = mla_from_sai(lf);
        LightField back = sai_from_mla(mla, 9, 9);
        benchmark::DoNotOptimize(back.views[0].data.data());
    }
}
BENCHMARK(bm_pack_unpack);

void bm_encoder_toy(benchmark::State& state) {
    const FeeParams fee = build_fee(10);
    const Tensor mla = random_tensor({3, 288, 288}, 11);
    for (auto _ : state) {
        Tensor out = fee_forward(fee, mla);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(bm_encoder_toy);

void bm_detector_toy(benchmark::State& state) {
    const std::size_t hw = static_cast<std::size_t>(state.range(0));
    const DetectorParams det = build_detector(Profile::Toy, 12);
    const Tensor in = random_tensor({3, hw, hw}, 13);
    for (auto _ : state) {
        Tensor out = detector_forward(det, in);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(bm_detector_toy)->Arg(16)->Arg(64);

void bm_pipeline_toy(benchmark::State& state) {
    const PipelineModel model = build_pipeline(Profile::Toy, 14);
    const LightField lf = random_field(9, 9, 32, 32, 15);
    for (auto _ : state) {
        Tensor out = pipeline_forward(model, lf);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(bm_pipeline_toy);

void bm_loss(benchmark::State& state) {
    const Tensor p = random_tensor({1, 256, 256}, 16);
    Tensor g = random_tensor({1, 256, 256}, 17);
    for (double& v : g.data) v = v < 0.3 ? 1.0 : 0.0;
    for (auto _ : state) {
        LossResult r = weighted_bce_loss(p, g, 0.528);
        benchmark::DoNotOptimize(r.grad.data.data());
    }
}
BENCHMARK(bm_loss);

void bm_metrics(benchmark::State& state) {
    const Tensor p = random_tensor({1, 64, 64}, 18);
    Tensor g = random_tensor({1, 64, 64}, 19);
    for (double& v : g.data) v = v < 0.3 ? 1.0 : 0.0;
    for (auto _ : state) {
        double f = f_beta(p, g);
        double fw = weighted_f_beta(p, g);
        double m = mae(p, g);
        benchmark::DoNotOptimize(f + fw + m);
    }
}
BENCHMARK(bm_metrics);

}  // namespace

int main(int argc, char** argv) {
    lfsal::set_compute_threads(1);
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
