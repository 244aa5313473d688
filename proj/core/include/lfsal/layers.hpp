#pragma once

#include <cstdint>
#include <vector>

#include "lfsal/tensor.hpp"

// Core neural-net ops on [C,H,W] tensors, double precision throughout.
// Convolutions run as tiled im2col + BLAS dgemm; backward passes recompute
// the column buffer instead of caching it, trading FLOPs for memory.

namespace lfsal {

enum class Padding { Valid, Same };
enum class Activation { None, Relu, Sigmoid };

struct ConvLayerSpec {
    std::size_t out_channels = 0;
    std::size_t in_channels = 0;
    std::size_t kernel_h = 0;
    std::size_t kernel_w = 0;
    std::size_t stride_h = 1;
    std::size_t stride_w = 1;
    std::size_t dilation_h = 1;
    std::size_t dilation_w = 1;
    Padding padding = Padding::Same;
    Activation activation = Activation::None;
};

// Weight layout [O,I,Kh,Kw], bias [O].
struct ConvLayer {
    ConvLayerSpec spec;
    Tensor weight;
    Tensor bias;
};

ConvLayer make_conv_layer(const ConvLayerSpec& spec);

// Output spatial extent for one axis. Same: ceil(in/stride); Valid requires
// the effective kernel to fit.
std::size_t conv_out_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                            std::size_t dilation, Padding padding);

// Padding applied before the first row/col for Same mode (0 for Valid).
std::size_t conv_pad_before(std::size_t in, std::size_t kernel, std::size_t stride,
                            std::size_t dilation, Padding padding);

Tensor conv2d_forward(const ConvLayer& layer, const Tensor& input);

// Forward that also keeps the post-activation output for the backward pass.
struct ConvCache {
    Tensor output;  // post-activation
};

Tensor conv2d_forward_cached(const ConvLayer& layer, const Tensor& input, ConvCache& cache);

struct ConvGrads {
    Tensor weight;
    Tensor bias;
};

// Backward through activation + conv. grad_out matches the forward output
// shape; returns grad wrt input and accumulates into grads.
Tensor conv2d_backward(const ConvLayer& layer, const Tensor& input, const ConvCache& cache,
                       const Tensor& grad_out, ConvGrads& grads);

// Elementwise activations (standalone, used by the loss/tests).
void relu_inplace(Tensor& t);
void sigmoid_inplace(Tensor& t);

// 2x2 max pooling, stride 2. Throws DimensionError on odd spatial extents.
struct PoolCache {
    std::vector<std::uint32_t> argmax;  // flat input index per output element
    std::vector<std::size_t> in_shape;
};

Tensor maxpool2x2_forward(const Tensor& input, PoolCache& cache);
Tensor maxpool2x2_backward(const PoolCache& cache, const Tensor& grad_out);

// Bilinear resize with half-pixel centers, per channel.
Tensor upsample_bilinear(const Tensor& input, std::size_t out_h, std::size_t out_w);
Tensor upsample_bilinear_backward(const Tensor& grad_out, std::size_t in_h, std::size_t in_w);

// Fully connected layer on flat vectors; weight [out,in], bias [out].
struct DenseLayer {
    Tensor weight;
    Tensor bias;
    Activation activation = Activation::None;
};

DenseLayer make_dense_layer(std::size_t out_dim, std::size_t in_dim, Activation act);

struct DenseCache {
    Tensor output;  // post-activation
};

Tensor dense_forward(const DenseLayer& layer, const Tensor& input, DenseCache& cache);
Tensor dense_backward(const DenseLayer& layer, const Tensor& input, const DenseCache& cache,
                      const Tensor& grad_out, ConvGrads& grads);

// Global average pool [C,H,W] -> [C].
Tensor global_avg_pool(const Tensor& input);
Tensor global_avg_pool_backward(const Tensor& grad_out, std::size_t h, std::size_t w);

// Channel-axis concatenation/split for [C,H,W] tensors (matching H,W).
Tensor concat_channels(const std::vector<const Tensor*>& parts);
std::vector<Tensor> split_channels(const Tensor& t, const std::vector<std::size_t>& sizes);

// Optional record of named intermediate shapes along a forward pass.
struct ShapeLog {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> entries;
    void add(const std::string& label, const Tensor& t) { entries.emplace_back(label, t.shape); }
};

// Multiply-accumulate accounting: every conv/dense forward adds its exact MAC
// count (C_out*C_in*Kh*Kw*H'*W' resp. out*in) to a process-wide counter.
void mac_counter_reset();
std::uint64_t mac_counter_read();

// Worker threads for the conv engine (default 1; BLAS itself stays pinned to
// one thread so results are bit-stable regardless of this setting).
void set_compute_threads(int n);
int compute_threads();

// Column-buffer budget for the tiled conv engine. A fixed budget (and a fixed
// thread count) gives bit-reproducible results; changing the budget reshapes
// the per-tile matrix product and may drift the output by an ulp. Tests shrink
// it to drive many-tile execution on small inputs.
void set_col_cap_bytes(std::size_t bytes);
std::size_t col_cap_bytes();

}  // namespace lfsal
