#pragma once

#include <array>

#include "lfsal/layers.hpp"
#include "lfsal/optimizer.hpp"

// Five-layer convolutional encoder mapping a micro-lens image [3, 9S, 9T] to
// a compact pseudo-RGB map [3, S/2, T/2]. The stride-(9,9) first layer reads
// each 9x9 angular block — one spatial position across all views — exactly
// once, which is what lets later 2-D convs see angular (parallax) structure.

namespace lfsal {

struct FeeParams {
    std::array<ConvLayer, 5> layers;
};

// Layer stack: 128@9x9 s9 valid + relu; 64@3x3 s1; 32@3x3 s1; 32@3x3 s2
// (all same + relu); 3@1x1 linear. Deterministic given seed.
FeeParams build_fee(std::uint64_t seed);

std::size_t fee_param_count(const FeeParams& params);

// Input spatial extents must be divisible by 9 (DimensionError otherwise).
Tensor fee_forward(const FeeParams& params, const Tensor& mla, ShapeLog* log = nullptr);

struct FeeCache {
    std::array<Tensor, 5> inputs;
    std::array<ConvCache, 5> convs;
};

Tensor fee_forward_cached(const FeeParams& params, const Tensor& mla, FeeCache& cache);

// Accumulates per-layer gradients into grads (names fee.L1..fee.L5) and
// returns the gradient with respect to the input image.
Tensor fee_backward(const FeeParams& params, const FeeCache& cache, const Tensor& grad_out,
                    GradSet& grads);

// Non-owning refs for the optimizer/checkpoint, named fee.L1 .. fee.L5.
ParamSet fee_params(FeeParams& params);

struct ReceptiveReport {
    std::size_t probes = 0;
    bool confined = true;  // every probed output depended on exactly its own block
};

// Gradient-probes the first layer: each output location must depend on one
// 9x9 input block only (the stride equals the kernel, so blocks tile).
ReceptiveReport fee_receptive_check(const FeeParams& params, std::uint64_t seed);

}  // namespace lfsal
