#include "lfsal/fee.hpp"

#include <cmath>

#include "lfsal/init.hpp"

namespace lfsal {
namespace {

constexpr std::size_t kBlock = 9;

const char* kNames[5] = {"fee.L1", "fee.L2", "fee.L3", "fee.L4", "fee.L5"};

ConvLayerSpec spec_of(std::size_t out_c, std::size_t in_c, std::size_t k, std::size_t stride,
                      Padding pad, Activation act) {
    ConvLayerSpec s;
    s.out_channels = out_c;
    s.in_channels = in_c;
    s.kernel_h = s.kernel_w = k;
    s.stride_h = s.stride_w = stride;
    s.padding = pad;
    s.activation = act;
    return s;
}

void check_input(const Tensor& mla) {
    if (mla.rank() != 3 || mla.extent(0) != 3)
        throw DimensionError("encoder input must be [3,H,W], got " + shape_str(mla.shape));
    if (mla.extent(1) % kBlock != 0 || mla.extent(2) % kBlock != 0)
        throw DimensionError("encoder input extents must be divisible by 9, got " +
                             shape_str(mla.shape));
}

}  // namespace

FeeParams build_fee(std::uint64_t seed) {
    FeeParams p;
    p.layers[0] = make_conv_layer(spec_of(128, 3, 9, 9, Padding::Valid, Activation::Relu));
    p.layers[1] = make_conv_layer(spec_of(64, 128, 3, 1, Padding::Same, Activation::Relu));
    p.layers[2] = make_conv_layer(spec_of(32, 64, 3, 1, Padding::Same, Activation::Relu));
    p.layers[3] = make_conv_layer(spec_of(32, 32, 3, 2, Padding::Same, Activation::Relu));
    p.layers[4] = make_conv_layer(spec_of(3, 32, 1, 1, Padding::Same, Activation::None));
    Rng rng(seed ^ 0xfee0fee0fee0ull);
    for (std::size_t i = 0; i < 4; ++i) init_conv_he(p.layers[i], rng);
    // Small linear head keeps the encoded map near zero at start, which keeps
    // the downstream detector's first activations in a sane range.
    init_conv_he(p.layers[4], rng, 0.1);
    return p;
}

std::size_t fee_param_count(const FeeParams& params) {
    std::size_t n = 0;
    for (const ConvLayer& l : params.layers) n += l.weight.numel() + l.bias.numel();
    return n;
}

Tensor fee_forward(const FeeParams& params, const Tensor& mla, ShapeLog* log) {
    check_input(mla);
    Tensor x = mla;
    for (std::size_t i = 0; i < 5; ++i) {
        x = conv2d_forward(params.layers[i], x);
        if (log) log->add(kNames[i], x);
    }
    return x;
}

Tensor fee_forward_cached(const FeeParams& params, const Tensor& mla, FeeCache& cache) {
    check_input(mla);
    Tensor x = mla;
    for (std::size_t i = 0; i < 5; ++i) {
        cache.inputs[i] = x;
        x = conv2d_forward_cached(params.layers[i], x, cache.convs[i]);
    }
    return x;
}

Tensor fee_backward(const FeeParams& params, const FeeCache& cache, const Tensor& grad_out,
                    GradSet& grads) {
    Tensor g = grad_out;
    for (std::size_t i = 5; i-- > 0;)
        g = conv2d_backward(params.layers[i], cache.inputs[i], cache.convs[i], g,
                            grads.at(kNames[i]));
    return g;
}

ParamSet fee_params(FeeParams& params) {
    ParamSet set;
    for (std::size_t i = 0; i < 5; ++i)
        set.push_back({kNames[i], &params.layers[i].weight, &params.layers[i].bias});
    return set;
}

ReceptiveReport fee_receptive_check(const FeeParams& params, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t s = 4, t = 4;  // 36x36 input, 4x4 first-layer grid
    Tensor input({3, kBlock * t, kBlock * s});
    for (double& v : input.data) v = rng.uniform();

    // Probe the conv itself with a linear activation so inactive relu units
    // cannot mask the dependency footprint being measured.
    ConvLayer probe_layer = params.layers[0];
    probe_layer.spec.activation = Activation::None;
    ConvCache cache;
    const Tensor out = conv2d_forward_cached(probe_layer, input, cache);

    ReceptiveReport report;
    for (std::size_t probe = 0; probe < 24; ++probe) {
        const std::size_t oc = rng.uniform_index(out.extent(0));
        const std::size_t oy = rng.uniform_index(out.extent(1));
        const std::size_t ox = rng.uniform_index(out.extent(2));
        Tensor grad_out = Tensor::zeros(out.shape);
        grad_out.at3(oc, oy, ox) = 1.0;
        ConvGrads sink;
        const Tensor grad_in = conv2d_backward(probe_layer, input, cache, grad_out, sink);
        bool inside_only = true;
        bool inside_any = false;
        for (std::size_t c = 0; c < 3 && inside_only; ++c)
            for (std::size_t y = 0; y < grad_in.extent(1) && inside_only; ++y)
                for (std::size_t x = 0; x < grad_in.extent(2); ++x) {
                    const bool nz = grad_in.at3(c, y, x) != 0.0;
                    const bool in_block =
                        y / kBlock == oy && x / kBlock == ox;
                    if (nz && !in_block) {
                        inside_only = false;
                        break;
                    }
                    if (nz && in_block) inside_any = true;
                }
        report.probes++;
        if (!inside_only || !inside_any) report.confined = false;
    }
    return report;
}

}  // namespace lfsal
