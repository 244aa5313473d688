#pragma once

#include <array>
#include <string>
#include <vector>

#include "lfsal/layers.hpp"
#include "lfsal/optimizer.hpp"

// 2-D saliency detector: a VGG-style backbone tapped at five depths, a
// multi-dilation pyramid (CPFE) over the three high-level taps gated by
// channel attention, a spatial attention gate over the fused low-level
// features, and a 1-channel sigmoid head. Input [3,H,W] with H, W divisible
// by 16 (four 2x2 pools) and at least 16.

namespace lfsal {

enum class Profile { Toy, Full };

struct DetectorProfile {
    std::array<std::size_t, 5> stage_ch;  // backbone widths per stage
    std::size_t cpfe_branch_ch;           // channels per pyramid branch
    std::size_t fusion_ch;                // width of both fusion paths
};

// Toy: (16,32,64,64,64)/8/16 — runs in seconds on a laptop core.
// Full: (64,128,256,512,512)/32/64 — the published-scale wiring.
DetectorProfile detector_profile(Profile p);

struct DetectorParams {
    Profile profile = Profile::Toy;
    std::vector<ConvLayer> backbone;    // 13 convs, stages of (2,2,3,3,3)
    std::array<ConvLayer, 12> cpfe;     // {tap3,tap4,tap5} x {1x1, dil 3, dil 5, dil 7}
    DenseLayer ca_fc1, ca_fc2;          // squeeze (C -> C/4 -> C) gate
    ConvLayer sa_a, sa_b;               // 9x1 and 1x9, each to 1 channel, summed
    ConvLayer head_low;                 // 3x3 over the low-level concat
    ConvLayer head_high;                // 1x1 after channel attention
    ConvLayer head_final;               // 3x3 to 1 channel + sigmoid
};

DetectorParams build_detector(Profile profile, std::uint64_t seed);
std::size_t detector_param_count(const DetectorParams& params);

// Non-owning named refs (det.backbone.*, det.cpfe.*, det.ca.*, det.sa.*,
// det.head.*) for the optimizer and checkpoint writer.
ParamSet detector_params(DetectorParams& params);

struct BackboneTaps {
    Tensor c1, c2, c3, c4, c5;  // strides /1, /2, /4, /8, /16 of the input
};

BackboneTaps backbone_forward(const DetectorParams& params, const Tensor& image);

// Pyramid features over the high-level taps, concatenated on the c3 grid.
Tensor cpfe_forward(const DetectorParams& params, const Tensor& c3, const Tensor& c4,
                    const Tensor& c5);

// Channel gate values in (0,1) per channel of f.
Tensor channel_gate(const DetectorParams& params, const Tensor& f);
Tensor channel_attention(const DetectorParams& params, const Tensor& f);

// Spatial gate map in (0,1), computed from the upsampled high-level summary.
Tensor spatial_gate(const DetectorParams& params, const Tensor& high_summary, std::size_t out_h,
                    std::size_t out_w);
Tensor spatial_attention(const DetectorParams& params, const Tensor& low,
                         const Tensor& high_summary);

Tensor detector_forward(const DetectorParams& params, const Tensor& encoded,
                        ShapeLog* log = nullptr);

// Training-path forward keeping every intermediate needed by the backward
// pass. Kept separate from the plain forward so full-resolution inference
// never pays the activation-memory bill.
struct DetectorCache {
    Tensor encoded;
    std::array<Tensor, 13> bb_inputs;
    std::array<ConvCache, 13> bb_convs;
    std::array<PoolCache, 4> pools;
    BackboneTaps taps;
    std::array<ConvCache, 12> cpfe_convs;
    Tensor cpfe_out;
    Tensor ca_pooled;
    DenseCache ca_fc1, ca_fc2;
    Tensor ca_gate;
    Tensor ca_out;
    ConvCache high_conv;
    Tensor high_summary;   // head_high output at c3 scale
    Tensor up_high;        // upsampled to input scale
    Tensor low_concat;
    ConvCache low_conv;
    Tensor low_feat;
    ConvCache sa_a_conv, sa_b_conv;
    Tensor sa_gate;        // [1,H,W]
    Tensor sa_out;
    Tensor final_concat;
    ConvCache final_conv;
};

Tensor detector_forward_cached(const DetectorParams& params, const Tensor& encoded,
                               DetectorCache& cache);

// Accumulates parameter gradients into grads and returns the gradient with
// respect to the encoded input.
Tensor detector_backward(const DetectorParams& params, const DetectorCache& cache,
                         const Tensor& grad_out, GradSet& grads);

}  // namespace lfsal
