#include "lfsal/layers.hpp"

#include <algorithm>
#include <atomic>
#include <cblas.h>
#include <cmath>
#include <cstring>
#include <thread>

// OpenBLAS-specific thread pin; keeps dgemm single-threaded and bit-stable.
extern "C" void openblas_set_num_threads(int);

namespace lfsal {
namespace {

std::atomic<std::uint64_t> g_macs{0};
int g_threads = 1;
std::atomic<bool> g_blas_pinned{false};

void pin_blas() {
    if (!g_blas_pinned.exchange(true)) openblas_set_num_threads(1);
}

// Cap on a column-buffer tile; keeps peak memory bounded at full image sizes.
// Mutable so tests can force many tiny tiles and prove the tiling is inert.
std::size_t g_col_cap_bytes = 64ull << 20;

struct ConvDims {
    std::size_t in_c, in_h, in_w;
    std::size_t out_h, out_w;
    std::size_t pad_h, pad_w;
    std::size_t k;  // in_c * kernel_h * kernel_w
};

ConvDims conv_dims(const ConvLayerSpec& s, const Tensor& input) {
    if (input.rank() != 3)
        throw DimensionError("conv input must be rank 3, got " + shape_str(input.shape));
    ConvDims d{};
    d.in_c = input.extent(0);
    d.in_h = input.extent(1);
    d.in_w = input.extent(2);
    if (d.in_c != s.in_channels)
        throw DimensionError("conv expects " + std::to_string(s.in_channels) + " channels, got " +
                             std::to_string(d.in_c));
    d.out_h = conv_out_extent(d.in_h, s.kernel_h, s.stride_h, s.dilation_h, s.padding);
    d.out_w = conv_out_extent(d.in_w, s.kernel_w, s.stride_w, s.dilation_w, s.padding);
    d.pad_h = conv_pad_before(d.in_h, s.kernel_h, s.stride_h, s.dilation_h, s.padding);
    d.pad_w = conv_pad_before(d.in_w, s.kernel_w, s.stride_w, s.dilation_w, s.padding);
    d.k = s.in_channels * s.kernel_h * s.kernel_w;
    return d;
}

// Fill col[k][tile cols] for output rows [r0,r1).
void im2col_tile(const ConvLayerSpec& s, const ConvDims& d, const Tensor& input, std::size_t r0,
                 std::size_t r1, double* col) {
    const std::size_t tcols = (r1 - r0) * d.out_w;
    for (std::size_t c = 0; c < d.in_c; ++c) {
        const double* in_ch = input.data.data() + c * d.in_h * d.in_w;
        for (std::size_t kh = 0; kh < s.kernel_h; ++kh) {
            for (std::size_t kw = 0; kw < s.kernel_w; ++kw) {
                const std::size_t k = (c * s.kernel_h + kh) * s.kernel_w + kw;
                double* row = col + k * tcols;
                const long off_x = (long)(kw * s.dilation_w) - (long)d.pad_w;
                for (std::size_t r = r0; r < r1; ++r) {
                    double* dst = row + (r - r0) * d.out_w;
                    const long in_y = (long)(r * s.stride_h) - (long)d.pad_h +
                                      (long)(kh * s.dilation_h);
                    if (in_y < 0 || in_y >= (long)d.in_h) {
                        std::fill(dst, dst + d.out_w, 0.0);
                        continue;
                    }
                    const double* src = in_ch + (std::size_t)in_y * d.in_w;
                    if (s.stride_w == 1) {
                        // Contiguous copy with zeroed borders.
                        const long lo = std::max(0l, -off_x);
                        const long hi = std::min((long)d.out_w, (long)d.in_w - off_x);
                        if (lo > 0) std::fill(dst, dst + std::min(lo, (long)d.out_w), 0.0);
                        if (hi > lo) std::copy(src + lo + off_x, src + hi + off_x, dst + lo);
                        if (hi < (long)d.out_w)
                            std::fill(dst + std::max(hi, 0l), dst + d.out_w, 0.0);
                    } else {
                        for (std::size_t cx = 0; cx < d.out_w; ++cx) {
                            const long in_x = (long)(cx * s.stride_w) + off_x;
                            dst[cx] = (in_x >= 0 && in_x < (long)d.in_w)
                                          ? src[in_x]
                                          : 0.0;
                        }
                    }
                }
            }
        }
    }
}

std::size_t tile_rows_for(const ConvDims& d) {
    const std::size_t cap =
        std::max<std::size_t>(1, g_col_cap_bytes / (d.k * d.out_w * sizeof(double)));
    return std::min(cap, d.out_h);
}

void conv_tile_forward(const ConvLayer& layer, const ConvDims& d, const Tensor& input,
                       std::size_t r0, std::size_t r1, std::vector<double>& col, Tensor& out) {
    const std::size_t tcols = (r1 - r0) * d.out_w;
    im2col_tile(layer.spec, d, input, r0, r1, col.data());
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, (int)layer.spec.out_channels,
                (int)tcols, (int)d.k, 1.0, layer.weight.data.data(), (int)d.k, col.data(),
                (int)tcols, 0.0, out.data.data() + r0 * d.out_w, (int)(d.out_h * d.out_w));
}

void apply_bias_activation(const ConvLayer& layer, const ConvDims& d, Tensor& out) {
    const std::size_t plane = d.out_h * d.out_w;
    for (std::size_t o = 0; o < layer.spec.out_channels; ++o) {
        double* p = out.data.data() + o * plane;
        const double b = layer.bias.data[o];
        switch (layer.spec.activation) {
            case Activation::None:
                for (std::size_t i = 0; i < plane; ++i) p[i] += b;
                break;
            case Activation::Relu:
                for (std::size_t i = 0; i < plane; ++i) p[i] = std::max(p[i] + b, 0.0);
                break;
            case Activation::Sigmoid:
                for (std::size_t i = 0; i < plane; ++i) p[i] = 1.0 / (1.0 + std::exp(-(p[i] + b)));
                break;
        }
    }
}

Tensor conv2d_run(const ConvLayer& layer, const Tensor& input) {
    pin_blas();
    const ConvDims d = conv_dims(layer.spec, input);
    ensure_same_shape(layer.weight,
                      Tensor::zeros({layer.spec.out_channels, layer.spec.in_channels,
                                     layer.spec.kernel_h, layer.spec.kernel_w}),
                      "conv weight");
    Tensor out({layer.spec.out_channels, d.out_h, d.out_w});

    const std::size_t trows = tile_rows_for(d);
    std::vector<std::pair<std::size_t, std::size_t>> tiles;
    for (std::size_t r0 = 0; r0 < d.out_h; r0 += trows)
        tiles.emplace_back(r0, std::min(r0 + trows, d.out_h));

    const int nthreads = std::max(1, std::min<int>(g_threads, (int)tiles.size()));
    if (nthreads == 1) {
        std::vector<double> col(d.k * trows * d.out_w);
        for (auto [r0, r1] : tiles) conv_tile_forward(layer, d, input, r0, r1, col, out);
    } else {
        // Tile boundaries are fixed above, so the split across threads cannot
        // change any tile's arithmetic: results match the serial path bit for
        // bit regardless of thread count.
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back([&] {
                std::vector<double> col(d.k * trows * d.out_w);
                for (std::size_t i = next.fetch_add(1); i < tiles.size(); i = next.fetch_add(1))
                    conv_tile_forward(layer, d, input, tiles[i].first, tiles[i].second, col, out);
            });
        }
        for (auto& th : pool) th.join();
    }

    apply_bias_activation(layer, d, out);
    g_macs.fetch_add((std::uint64_t)layer.spec.out_channels * layer.spec.in_channels *
                         layer.spec.kernel_h * layer.spec.kernel_w * d.out_h * d.out_w,
                     std::memory_order_relaxed);
    ensure_finite(out, "conv2d_forward");
    return out;
}

// grad wrt pre-activation, given post-activation values.
void activation_backward(Activation act, const Tensor& post, const Tensor& grad_out,
                         Tensor& grad_pre) {
    grad_pre = grad_out;
    switch (act) {
        case Activation::None:
            break;
        case Activation::Relu:
            for (std::size_t i = 0; i < grad_pre.numel(); ++i)
                if (post.data[i] <= 0.0) grad_pre.data[i] = 0.0;
            break;
        case Activation::Sigmoid:
            for (std::size_t i = 0; i < grad_pre.numel(); ++i)
                grad_pre.data[i] *= post.data[i] * (1.0 - post.data[i]);
            break;
    }
}

}  // namespace

ConvLayer make_conv_layer(const ConvLayerSpec& spec) {
    ConvLayer l;
    l.spec = spec;
    l.weight = Tensor::zeros({spec.out_channels, spec.in_channels, spec.kernel_h, spec.kernel_w});
    l.bias = Tensor::zeros({spec.out_channels});
    return l;
}

std::size_t conv_out_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                            std::size_t dilation, Padding padding) {
    if (kernel == 0 || stride == 0 || dilation == 0)
        throw DimensionError("conv kernel/stride/dilation must be positive");
    const std::size_t ke = (kernel - 1) * dilation + 1;
    if (padding == Padding::Same) return (in + stride - 1) / stride;
    if (in < ke)
        throw DimensionError("conv input extent " + std::to_string(in) +
                             " smaller than effective kernel " + std::to_string(ke));
    return (in - ke) / stride + 1;
}

std::size_t conv_pad_before(std::size_t in, std::size_t kernel, std::size_t stride,
                            std::size_t dilation, Padding padding) {
    if (padding == Padding::Valid) return 0;
    const std::size_t ke = (kernel - 1) * dilation + 1;
    const std::size_t out = (in + stride - 1) / stride;
    const long total = (long)((out - 1) * stride + ke) - (long)in;
    return total > 0 ? (std::size_t)total / 2 : 0;
}

Tensor conv2d_forward(const ConvLayer& layer, const Tensor& input) {
    return conv2d_run(layer, input);
}

Tensor conv2d_forward_cached(const ConvLayer& layer, const Tensor& input, ConvCache& cache) {
    cache.output = conv2d_run(layer, input);
    return cache.output;
}

Tensor conv2d_backward(const ConvLayer& layer, const Tensor& input, const ConvCache& cache,
                       const Tensor& grad_out, ConvGrads& grads) {
    pin_blas();
    const ConvDims d = conv_dims(layer.spec, input);
    ensure_same_shape(grad_out, cache.output, "conv2d_backward grad_out");
    if (grads.weight.numel() == 0) {
        grads.weight = Tensor::zeros(layer.weight.shape);
        grads.bias = Tensor::zeros(layer.bias.shape);
    }

    Tensor grad_pre;
    activation_backward(layer.spec.activation, cache.output, grad_out, grad_pre);

    for (std::size_t o = 0; o < layer.spec.out_channels; ++o) {
        double acc = 0.0;
        const double* p = grad_pre.data.data() + o * d.out_h * d.out_w;
        for (std::size_t i = 0; i < d.out_h * d.out_w; ++i) acc += p[i];
        grads.bias.data[o] += acc;
    }

    Tensor grad_in = Tensor::zeros(input.shape);
    const std::size_t trows = tile_rows_for(d);
    std::vector<double> col(d.k * trows * d.out_w);
    std::vector<double> colgrad(d.k * trows * d.out_w);
    // Backward stays serial: the col2im scatters of neighbouring tiles touch
    // overlapping input rows, and training-size problems don't need the speed.
    for (std::size_t r0 = 0; r0 < d.out_h; r0 += trows) {
        const std::size_t r1 = std::min(r0 + trows, d.out_h);
        const std::size_t tcols = (r1 - r0) * d.out_w;
        im2col_tile(layer.spec, d, input, r0, r1, col.data());
        // dW += grad_pre(tile) * col^T
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, (int)layer.spec.out_channels,
                    (int)d.k, (int)tcols, 1.0, grad_pre.data.data() + r0 * d.out_w,
                    (int)(d.out_h * d.out_w), col.data(), (int)tcols, 1.0,
                    grads.weight.data.data(), (int)d.k);
        // col grads = W^T * grad_pre(tile), then scatter back to the input.
        cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, (int)d.k, (int)tcols,
                    (int)layer.spec.out_channels, 1.0, layer.weight.data.data(), (int)d.k,
                    grad_pre.data.data() + r0 * d.out_w, (int)(d.out_h * d.out_w), 0.0,
                    colgrad.data(), (int)tcols);
        for (std::size_t c = 0; c < d.in_c; ++c) {
            double* in_ch = grad_in.data.data() + c * d.in_h * d.in_w;
            for (std::size_t kh = 0; kh < layer.spec.kernel_h; ++kh) {
                for (std::size_t kw = 0; kw < layer.spec.kernel_w; ++kw) {
                    const std::size_t k = (c * layer.spec.kernel_h + kh) * layer.spec.kernel_w + kw;
                    const double* row = colgrad.data() + k * tcols;
                    for (std::size_t r = r0; r < r1; ++r) {
                        const long in_y = (long)(r * layer.spec.stride_h) - (long)d.pad_h +
                                          (long)(kh * layer.spec.dilation_h);
                        if (in_y < 0 || in_y >= (long)d.in_h) continue;
                        const double* src = row + (r - r0) * d.out_w;
                        double* dst = in_ch + (std::size_t)in_y * d.in_w;
                        for (std::size_t cx = 0; cx < d.out_w; ++cx) {
                            const long in_x = (long)(cx * layer.spec.stride_w) -
                                              (long)d.pad_w + (long)(kw * layer.spec.dilation_w);
                            if (in_x >= 0 && in_x < (long)d.in_w) dst[in_x] += src[cx];
                        }
                    }
                }
            }
        }
    }
    return grad_in;
}

void relu_inplace(Tensor& t) {
    for (double& v : t.data) v = std::max(v, 0.0);
}

void sigmoid_inplace(Tensor& t) {
    for (double& v : t.data) v = 1.0 / (1.0 + std::exp(-v));
}

Tensor maxpool2x2_forward(const Tensor& input, PoolCache& cache) {
    if (input.rank() != 3)
        throw DimensionError("maxpool input must be rank 3, got " + shape_str(input.shape));
    const std::size_t c = input.extent(0), h = input.extent(1), w = input.extent(2);
    if (h % 2 != 0 || w % 2 != 0)
        throw DimensionError("maxpool2x2 needs even spatial extents, got " +
                             shape_str(input.shape));
    Tensor out({c, h / 2, w / 2});
    cache.argmax.assign(out.numel(), 0);
    cache.in_shape = input.shape;
    for (std::size_t ch = 0; ch < c; ++ch) {
        const double* in_ch = input.data.data() + ch * h * w;
        for (std::size_t y = 0; y < h / 2; ++y) {
            for (std::size_t x = 0; x < w / 2; ++x) {
                std::size_t best = (2 * y) * w + 2 * x;
                double bv = in_ch[best];
                const std::size_t cands[3] = {(2 * y) * w + 2 * x + 1, (2 * y + 1) * w + 2 * x,
                                              (2 * y + 1) * w + 2 * x + 1};
                for (std::size_t idx : cands) {
                    if (in_ch[idx] > bv) {
                        bv = in_ch[idx];
                        best = idx;
                    }
                }
                const std::size_t oi = (ch * (h / 2) + y) * (w / 2) + x;
                out.data[oi] = bv;
                cache.argmax[oi] = (std::uint32_t)(ch * h * w + best);
            }
        }
    }
    return out;
}

Tensor maxpool2x2_backward(const PoolCache& cache, const Tensor& grad_out) {
    Tensor grad_in = Tensor::zeros(cache.in_shape);
    if (grad_out.numel() != cache.argmax.size())
        throw DimensionError("maxpool backward grad size mismatch");
    for (std::size_t i = 0; i < grad_out.numel(); ++i)
        grad_in.data[cache.argmax[i]] += grad_out.data[i];
    return grad_in;
}

namespace {

struct LerpAxis {
    std::vector<std::size_t> i0, i1;
    std::vector<double> w;  // weight on i1
};

LerpAxis lerp_axis(std::size_t in, std::size_t out) {
    LerpAxis a;
    a.i0.resize(out);
    a.i1.resize(out);
    a.w.resize(out);
    for (std::size_t o = 0; o < out; ++o) {
        // Half-pixel centers: output o samples input coordinate (o+.5)*s-.5.
        double c = ((double)o + 0.5) * (double)in / (double)out - 0.5;
        long i0 = (long)std::floor(c);
        double w = c - (double)i0;
        if (i0 < 0) {
            i0 = 0;
            w = 0.0;
        }
        if (i0 >= (long)in - 1) {
            i0 = (long)in - 1;
            w = 0.0;
        }
        a.i0[o] = (std::size_t)i0;
        a.i1[o] = std::min((std::size_t)i0 + 1, in - 1);
        a.w[o] = w;
    }
    return a;
}

}  // namespace

Tensor upsample_bilinear(const Tensor& input, std::size_t out_h, std::size_t out_w) {
    if (input.rank() != 3)
        throw DimensionError("upsample input must be rank 3, got " + shape_str(input.shape));
    const std::size_t c = input.extent(0), h = input.extent(1), w = input.extent(2);
    const LerpAxis ay = lerp_axis(h, out_h), ax = lerp_axis(w, out_w);
    Tensor out({c, out_h, out_w});
    for (std::size_t ch = 0; ch < c; ++ch) {
        const double* in_ch = input.data.data() + ch * h * w;
        double* out_ch = out.data.data() + ch * out_h * out_w;
        for (std::size_t y = 0; y < out_h; ++y) {
            const double* r0 = in_ch + ay.i0[y] * w;
            const double* r1 = in_ch + ay.i1[y] * w;
            const double wy = ay.w[y];
            for (std::size_t x = 0; x < out_w; ++x) {
                const double wx = ax.w[x];
                const double top = r0[ax.i0[x]] * (1.0 - wx) + r0[ax.i1[x]] * wx;
                const double bot = r1[ax.i0[x]] * (1.0 - wx) + r1[ax.i1[x]] * wx;
                out_ch[y * out_w + x] = top * (1.0 - wy) + bot * wy;
            }
        }
    }
    return out;
}

Tensor upsample_bilinear_backward(const Tensor& grad_out, std::size_t in_h, std::size_t in_w) {
    if (grad_out.rank() != 3)
        throw DimensionError("upsample grad must be rank 3, got " + shape_str(grad_out.shape));
    const std::size_t c = grad_out.extent(0), oh = grad_out.extent(1), ow = grad_out.extent(2);
    const LerpAxis ay = lerp_axis(in_h, oh), ax = lerp_axis(in_w, ow);
    Tensor grad_in = Tensor::zeros({c, in_h, in_w});
    for (std::size_t ch = 0; ch < c; ++ch) {
        const double* g_ch = grad_out.data.data() + ch * oh * ow;
        double* in_ch = grad_in.data.data() + ch * in_h * in_w;
        for (std::size_t y = 0; y < oh; ++y) {
            const double wy = ay.w[y];
            for (std::size_t x = 0; x < ow; ++x) {
                const double wx = ax.w[x];
                const double g = g_ch[y * ow + x];
                in_ch[ay.i0[y] * in_w + ax.i0[x]] += g * (1.0 - wy) * (1.0 - wx);
                in_ch[ay.i0[y] * in_w + ax.i1[x]] += g * (1.0 - wy) * wx;
                in_ch[ay.i1[y] * in_w + ax.i0[x]] += g * wy * (1.0 - wx);
                in_ch[ay.i1[y] * in_w + ax.i1[x]] += g * wy * wx;
            }
        }
    }
    return grad_in;
}

DenseLayer make_dense_layer(std::size_t out_dim, std::size_t in_dim, Activation act) {
    DenseLayer l;
    l.weight = Tensor::zeros({out_dim, in_dim});
    l.bias = Tensor::zeros({out_dim});
    l.activation = act;
    return l;
}

Tensor dense_forward(const DenseLayer& layer, const Tensor& input, DenseCache& cache) {
    const std::size_t out_dim = layer.weight.extent(0), in_dim = layer.weight.extent(1);
    if (input.numel() != in_dim)
        throw DimensionError("dense expects " + std::to_string(in_dim) + " inputs, got " +
                             std::to_string(input.numel()));
    Tensor out({out_dim});
    for (std::size_t o = 0; o < out_dim; ++o) {
        double acc = layer.bias.data[o];
        const double* wr = layer.weight.data.data() + o * in_dim;
        for (std::size_t i = 0; i < in_dim; ++i) acc += wr[i] * input.data[i];
        out.data[o] = acc;
    }
    switch (layer.activation) {
        case Activation::None:
            break;
        case Activation::Relu:
            relu_inplace(out);
            break;
        case Activation::Sigmoid:
            sigmoid_inplace(out);
            break;
    }
    g_macs.fetch_add((std::uint64_t)out_dim * in_dim, std::memory_order_relaxed);
    ensure_finite(out, "dense_forward");
    cache.output = out;
    return out;
}

Tensor dense_backward(const DenseLayer& layer, const Tensor& input, const DenseCache& cache,
                      const Tensor& grad_out, ConvGrads& grads) {
    const std::size_t out_dim = layer.weight.extent(0), in_dim = layer.weight.extent(1);
    ensure_same_shape(grad_out, cache.output, "dense_backward grad_out");
    if (grads.weight.numel() == 0) {
        grads.weight = Tensor::zeros(layer.weight.shape);
        grads.bias = Tensor::zeros(layer.bias.shape);
    }
    Tensor grad_pre;
    activation_backward(layer.activation, cache.output, grad_out, grad_pre);
    Tensor grad_in = Tensor::zeros(input.shape);
    for (std::size_t o = 0; o < out_dim; ++o) {
        const double g = grad_pre.data[o];
        grads.bias.data[o] += g;
        double* wg = grads.weight.data.data() + o * in_dim;
        const double* wr = layer.weight.data.data() + o * in_dim;
        for (std::size_t i = 0; i < in_dim; ++i) {
            wg[i] += g * input.data[i];
            grad_in.data[i] += g * wr[i];
        }
    }
    return grad_in;
}

Tensor global_avg_pool(const Tensor& input) {
    if (input.rank() != 3)
        throw DimensionError("global_avg_pool input must be rank 3, got " +
                             shape_str(input.shape));
    const std::size_t c = input.extent(0), plane = input.extent(1) * input.extent(2);
    Tensor out({c});
    for (std::size_t ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        const double* p = input.data.data() + ch * plane;
        for (std::size_t i = 0; i < plane; ++i) acc += p[i];
        out.data[ch] = acc / (double)plane;
    }
    return out;
}

Tensor global_avg_pool_backward(const Tensor& grad_out, std::size_t h, std::size_t w) {
    const std::size_t c = grad_out.numel();
    Tensor grad_in({c, h, w});
    for (std::size_t ch = 0; ch < c; ++ch) {
        const double g = grad_out.data[ch] / (double)(h * w);
        double* p = grad_in.data.data() + ch * h * w;
        for (std::size_t i = 0; i < h * w; ++i) p[i] = g;
    }
    return grad_in;
}

Tensor concat_channels(const std::vector<const Tensor*>& parts) {
    if (parts.empty()) throw DimensionError("concat_channels needs at least one part");
    const std::size_t h = parts[0]->extent(1), w = parts[0]->extent(2);
    std::size_t total = 0;
    for (const Tensor* p : parts) {
        if (p->rank() != 3 || p->extent(1) != h || p->extent(2) != w)
            throw DimensionError("concat_channels spatial mismatch: " + shape_str(p->shape));
        total += p->extent(0);
    }
    Tensor out({total, h, w});
    double* dst = out.data.data();
    for (const Tensor* p : parts) {
        std::copy(p->data.begin(), p->data.end(), dst);
        dst += p->numel();
    }
    return out;
}

std::vector<Tensor> split_channels(const Tensor& t, const std::vector<std::size_t>& sizes) {
    std::size_t total = 0;
    for (std::size_t s : sizes) total += s;
    if (t.rank() != 3 || t.extent(0) != total)
        throw DimensionError("split_channels sizes do not cover " + shape_str(t.shape));
    const std::size_t h = t.extent(1), w = t.extent(2);
    std::vector<Tensor> parts;
    const double* src = t.data.data();
    for (std::size_t s : sizes) {
        Tensor part({s, h, w});
        std::copy(src, src + part.numel(), part.data.data());
        src += part.numel();
        parts.push_back(std::move(part));
    }
    return parts;
}

void mac_counter_reset() { g_macs.store(0); }

std::uint64_t mac_counter_read() { return g_macs.load(); }

void set_compute_threads(int n) { g_threads = std::max(1, n); }

int compute_threads() { return g_threads; }

void set_col_cap_bytes(std::size_t bytes) { g_col_cap_bytes = std::max<std::size_t>(64, bytes); }

std::size_t col_cap_bytes() { return g_col_cap_bytes; }

}  // namespace lfsal
