#include "lfsal/detector.hpp"

#include "lfsal/init.hpp"

namespace lfsal {
namespace {

const char* kBackboneNames[13] = {
    "det.backbone.s1c1", "det.backbone.s1c2", "det.backbone.s2c1", "det.backbone.s2c2",
    "det.backbone.s3c1", "det.backbone.s3c2", "det.backbone.s3c3", "det.backbone.s4c1",
    "det.backbone.s4c2", "det.backbone.s4c3", "det.backbone.s5c1", "det.backbone.s5c2",
    "det.backbone.s5c3"};

const char* kCpfeNames[12] = {"det.cpfe.c3.k1", "det.cpfe.c3.d3", "det.cpfe.c3.d5",
                              "det.cpfe.c3.d7", "det.cpfe.c4.k1", "det.cpfe.c4.d3",
                              "det.cpfe.c4.d5", "det.cpfe.c4.d7", "det.cpfe.c5.k1",
                              "det.cpfe.c5.d3", "det.cpfe.c5.d5", "det.cpfe.c5.d7"};

ConvLayerSpec conv_spec(std::size_t out_c, std::size_t in_c, std::size_t kh, std::size_t kw,
                        Activation act, std::size_t dilation = 1) {
    ConvLayerSpec s;
    s.out_channels = out_c;
    s.in_channels = in_c;
    s.kernel_h = kh;
    s.kernel_w = kw;
    s.dilation_h = s.dilation_w = dilation;
    s.padding = Padding::Same;
    s.activation = act;
    return s;
}

void check_input(const Tensor& encoded) {
    if (encoded.rank() != 3 || encoded.extent(0) != 3)
        throw DimensionError("detector input must be [3,H,W], got " + shape_str(encoded.shape));
    const std::size_t h = encoded.extent(1), w = encoded.extent(2);
    if (h < 16 || w < 16 || h % 16 != 0 || w % 16 != 0)
        throw DimensionError("detector input extents must be multiples of 16 and at least 16, "
                             "got " +
                             shape_str(encoded.shape));
}

void add_into(Tensor& acc, const Tensor& t) {
    ensure_same_shape(acc, t, "gradient accumulation");
    for (std::size_t i = 0; i < acc.numel(); ++i) acc.data[i] += t.data[i];
}

std::size_t cpfe_channels(const DetectorProfile& prof) { return 12 * prof.cpfe_branch_ch; }

}  // namespace

DetectorProfile detector_profile(Profile p) {
    if (p == Profile::Full) return {{64, 128, 256, 512, 512}, 32, 64};
    return {{16, 32, 64, 64, 64}, 8, 16};
}

DetectorParams build_detector(Profile profile, std::uint64_t seed) {
    const DetectorProfile prof = detector_profile(profile);
    DetectorParams p;
    p.profile = profile;

    const std::size_t counts[5] = {2, 2, 3, 3, 3};
    std::size_t in_c = 3;
    for (std::size_t stage = 0; stage < 5; ++stage) {
        for (std::size_t i = 0; i < counts[stage]; ++i) {
            p.backbone.push_back(make_conv_layer(
                conv_spec(prof.stage_ch[stage], in_c, 3, 3, Activation::Relu)));
            in_c = prof.stage_ch[stage];
        }
    }

    const std::size_t tap_ch[3] = {prof.stage_ch[2], prof.stage_ch[3], prof.stage_ch[4]};
    for (std::size_t t = 0; t < 3; ++t) {
        p.cpfe[t * 4 + 0] =
            make_conv_layer(conv_spec(prof.cpfe_branch_ch, tap_ch[t], 1, 1, Activation::Relu));
        const std::size_t dils[3] = {3, 5, 7};
        for (std::size_t d = 0; d < 3; ++d)
            p.cpfe[t * 4 + 1 + d] = make_conv_layer(
                conv_spec(prof.cpfe_branch_ch, tap_ch[t], 3, 3, Activation::Relu, dils[d]));
    }

    const std::size_t c_cpfe = cpfe_channels(prof);
    p.ca_fc1 = make_dense_layer(c_cpfe / 4, c_cpfe, Activation::Relu);
    p.ca_fc2 = make_dense_layer(c_cpfe, c_cpfe / 4, Activation::Sigmoid);

    p.sa_a = make_conv_layer(conv_spec(1, prof.fusion_ch, 9, 1, Activation::None));
    p.sa_b = make_conv_layer(conv_spec(1, prof.fusion_ch, 1, 9, Activation::None));

    p.head_low = make_conv_layer(
        conv_spec(prof.fusion_ch, prof.stage_ch[0] + prof.stage_ch[1], 3, 3, Activation::Relu));
    p.head_high = make_conv_layer(conv_spec(prof.fusion_ch, c_cpfe, 1, 1, Activation::Relu));
    p.head_final =
        make_conv_layer(conv_spec(1, 2 * prof.fusion_ch, 3, 3, Activation::Sigmoid));

    Rng rng(seed ^ 0xde7ec7ull);
    for (ConvLayer& l : p.backbone) init_conv_he(l, rng);
    for (ConvLayer& l : p.cpfe) init_conv_he(l, rng);
    init_dense_he(p.ca_fc1, rng);
    init_dense_he(p.ca_fc2, rng);
    init_conv_he(p.sa_a, rng);
    init_conv_he(p.sa_b, rng);
    init_conv_he(p.head_low, rng);
    init_conv_he(p.head_high, rng);
    init_conv_he(p.head_final, rng);
    return p;
}

std::size_t detector_param_count(const DetectorParams& params) {
    std::size_t n = 0;
    DetectorParams& mut = const_cast<DetectorParams&>(params);
    for (const ParamRef& r : detector_params(mut)) n += r.weight->numel() + r.bias->numel();
    return n;
}

ParamSet detector_params(DetectorParams& p) {
    ParamSet set;
    for (std::size_t i = 0; i < p.backbone.size(); ++i)
        set.push_back({kBackboneNames[i], &p.backbone[i].weight, &p.backbone[i].bias});
    for (std::size_t i = 0; i < p.cpfe.size(); ++i)
        set.push_back({kCpfeNames[i], &p.cpfe[i].weight, &p.cpfe[i].bias});
    set.push_back({"det.ca.fc1", &p.ca_fc1.weight, &p.ca_fc1.bias});
    set.push_back({"det.ca.fc2", &p.ca_fc2.weight, &p.ca_fc2.bias});
    set.push_back({"det.sa.conv9x1", &p.sa_a.weight, &p.sa_a.bias});
    set.push_back({"det.sa.conv1x9", &p.sa_b.weight, &p.sa_b.bias});
    set.push_back({"det.head.low", &p.head_low.weight, &p.head_low.bias});
    set.push_back({"det.head.high", &p.head_high.weight, &p.head_high.bias});
    set.push_back({"det.head.final", &p.head_final.weight, &p.head_final.bias});
    return set;
}

BackboneTaps backbone_forward(const DetectorParams& params, const Tensor& image) {
    check_input(image);
    BackboneTaps taps;
    PoolCache scratch;
    Tensor x = conv2d_forward(params.backbone[0], image);
    x = conv2d_forward(params.backbone[1], x);
    taps.c1 = x;
    x = maxpool2x2_forward(x, scratch);
    x = conv2d_forward(params.backbone[2], x);
    x = conv2d_forward(params.backbone[3], x);
    taps.c2 = x;
    x = maxpool2x2_forward(x, scratch);
    for (std::size_t i = 4; i <= 6; ++i) x = conv2d_forward(params.backbone[i], x);
    taps.c3 = x;
    x = maxpool2x2_forward(x, scratch);
    for (std::size_t i = 7; i <= 9; ++i) x = conv2d_forward(params.backbone[i], x);
    taps.c4 = x;
    x = maxpool2x2_forward(x, scratch);
    for (std::size_t i = 10; i <= 12; ++i) x = conv2d_forward(params.backbone[i], x);
    taps.c5 = x;
    return taps;
}

Tensor cpfe_forward(const DetectorParams& params, const Tensor& c3, const Tensor& c4,
                    const Tensor& c5) {
    const std::size_t h = c3.extent(1), w = c3.extent(2);
    std::vector<Tensor> branches;
    const Tensor* taps[3] = {&c3, &c4, &c5};
    for (std::size_t t = 0; t < 3; ++t) {
        for (std::size_t k = 0; k < 4; ++k) {
            Tensor b = conv2d_forward(params.cpfe[t * 4 + k], *taps[t]);
            if (t > 0) b = upsample_bilinear(b, h, w);
            branches.push_back(std::move(b));
        }
    }
    std::vector<const Tensor*> refs;
    for (const Tensor& b : branches) refs.push_back(&b);
    return concat_channels(refs);
}

Tensor channel_gate(const DetectorParams& params, const Tensor& f) {
    DenseCache d1, d2;
    const Tensor pooled = global_avg_pool(f);
    const Tensor hidden = dense_forward(params.ca_fc1, pooled, d1);
    return dense_forward(params.ca_fc2, hidden, d2);
}

Tensor channel_attention(const DetectorParams& params, const Tensor& f) {
    const Tensor gate = channel_gate(params, f);
    if (gate.numel() != f.extent(0))
        throw DimensionError("channel gate width mismatch for " + shape_str(f.shape));
    Tensor out = f;
    const std::size_t plane = f.extent(1) * f.extent(2);
    for (std::size_t c = 0; c < f.extent(0); ++c) {
        double* p = out.data.data() + c * plane;
        for (std::size_t i = 0; i < plane; ++i) p[i] *= gate.data[c];
    }
    return out;
}

Tensor spatial_gate(const DetectorParams& params, const Tensor& high_summary, std::size_t out_h,
                    std::size_t out_w) {
    const Tensor up = upsample_bilinear(high_summary, out_h, out_w);
    const Tensor a = conv2d_forward(params.sa_a, up);
    const Tensor b = conv2d_forward(params.sa_b, up);
    Tensor m = a;
    for (std::size_t i = 0; i < m.numel(); ++i) m.data[i] += b.data[i];
    sigmoid_inplace(m);
    return m;
}

Tensor spatial_attention(const DetectorParams& params, const Tensor& low,
                         const Tensor& high_summary) {
    const Tensor m = spatial_gate(params, high_summary, low.extent(1), low.extent(2));
    Tensor out = low;
    const std::size_t plane = low.extent(1) * low.extent(2);
    for (std::size_t c = 0; c < low.extent(0); ++c) {
        double* p = out.data.data() + c * plane;
        for (std::size_t i = 0; i < plane; ++i) p[i] *= m.data[i];
    }
    return out;
}

Tensor detector_forward(const DetectorParams& params, const Tensor& encoded, ShapeLog* log) {
    check_input(encoded);
    const std::size_t h = encoded.extent(1), w = encoded.extent(2);

    const BackboneTaps taps = backbone_forward(params, encoded);
    if (log) {
        log->add("backbone.conv1_2", taps.c1);
        log->add("backbone.conv2_2", taps.c2);
        log->add("backbone.conv3_3", taps.c3);
        log->add("backbone.conv4_3", taps.c4);
        log->add("backbone.conv5_3", taps.c5);
    }

    const Tensor cpfe = cpfe_forward(params, taps.c3, taps.c4, taps.c5);
    if (log) log->add("cpfe", cpfe);
    const Tensor ca_out = channel_attention(params, cpfe);
    const Tensor high_summary = conv2d_forward(params.head_high, ca_out);
    const Tensor up_high = upsample_bilinear(high_summary, h, w);
    if (log) log->add("high_path", up_high);

    const Tensor up_c2 = upsample_bilinear(taps.c2, h, w);
    const Tensor low_concat = concat_channels({&taps.c1, &up_c2});
    if (log) log->add("low_concat", low_concat);
    const Tensor low_feat = conv2d_forward(params.head_low, low_concat);
    const Tensor sa_out = spatial_attention(params, low_feat, high_summary);

    const Tensor final_concat = concat_channels({&sa_out, &up_high});
    if (log) log->add("fusion_concat", final_concat);
    Tensor out = conv2d_forward(params.head_final, final_concat);
    if (log) log->add("saliency", out);
    return out;
}

Tensor detector_forward_cached(const DetectorParams& params, const Tensor& encoded,
                               DetectorCache& cache) {
    check_input(encoded);
    const std::size_t h = encoded.extent(1), w = encoded.extent(2);
    cache.encoded = encoded;

    Tensor x = encoded;
    std::size_t conv_i = 0, pool_i = 0;
    const std::size_t stage_len[5] = {2, 2, 3, 3, 3};
    Tensor* tap_slots[5] = {&cache.taps.c1, &cache.taps.c2, &cache.taps.c3, &cache.taps.c4,
                            &cache.taps.c5};
    for (std::size_t stage = 0; stage < 5; ++stage) {
        for (std::size_t i = 0; i < stage_len[stage]; ++i, ++conv_i) {
            cache.bb_inputs[conv_i] = x;
            x = conv2d_forward_cached(params.backbone[conv_i], x, cache.bb_convs[conv_i]);
        }
        *tap_slots[stage] = x;
        if (stage < 4) x = maxpool2x2_forward(x, cache.pools[pool_i++]);
    }

    const std::size_t ch = cache.taps.c3.extent(1), cw = cache.taps.c3.extent(2);
    std::vector<Tensor> branches;
    const Tensor* cpfe_taps[3] = {&cache.taps.c3, &cache.taps.c4, &cache.taps.c5};
    for (std::size_t t = 0; t < 3; ++t) {
        for (std::size_t k = 0; k < 4; ++k) {
            Tensor b = conv2d_forward_cached(params.cpfe[t * 4 + k], *cpfe_taps[t],
                                             cache.cpfe_convs[t * 4 + k]);
            if (t > 0) b = upsample_bilinear(b, ch, cw);
            branches.push_back(std::move(b));
        }
    }
    std::vector<const Tensor*> refs;
    for (const Tensor& b : branches) refs.push_back(&b);
    cache.cpfe_out = concat_channels(refs);

    cache.ca_pooled = global_avg_pool(cache.cpfe_out);
    const Tensor hidden = dense_forward(params.ca_fc1, cache.ca_pooled, cache.ca_fc1);
    cache.ca_gate = dense_forward(params.ca_fc2, hidden, cache.ca_fc2);
    cache.ca_out = cache.cpfe_out;
    {
        const std::size_t plane = ch * cw;
        for (std::size_t c = 0; c < cache.ca_out.extent(0); ++c) {
            double* p = cache.ca_out.data.data() + c * plane;
            for (std::size_t i = 0; i < plane; ++i) p[i] *= cache.ca_gate.data[c];
        }
    }

    cache.high_summary = conv2d_forward_cached(params.head_high, cache.ca_out, cache.high_conv);
    cache.up_high = upsample_bilinear(cache.high_summary, h, w);

    const Tensor up_c2 = upsample_bilinear(cache.taps.c2, h, w);
    cache.low_concat = concat_channels({&cache.taps.c1, &up_c2});
    cache.low_feat = conv2d_forward_cached(params.head_low, cache.low_concat, cache.low_conv);

    const Tensor a = conv2d_forward_cached(params.sa_a, cache.up_high, cache.sa_a_conv);
    const Tensor b = conv2d_forward_cached(params.sa_b, cache.up_high, cache.sa_b_conv);
    cache.sa_gate = a;
    for (std::size_t i = 0; i < cache.sa_gate.numel(); ++i) cache.sa_gate.data[i] += b.data[i];
    sigmoid_inplace(cache.sa_gate);

    cache.sa_out = cache.low_feat;
    {
        const std::size_t plane = h * w;
        for (std::size_t c = 0; c < cache.sa_out.extent(0); ++c) {
            double* p = cache.sa_out.data.data() + c * plane;
            for (std::size_t i = 0; i < plane; ++i) p[i] *= cache.sa_gate.data[i];
        }
    }

    cache.final_concat = concat_channels({&cache.sa_out, &cache.up_high});
    return conv2d_forward_cached(params.head_final, cache.final_concat, cache.final_conv);
}

Tensor detector_backward(const DetectorParams& params, const DetectorCache& cache,
                         const Tensor& grad_out, GradSet& grads) {
    const DetectorProfile prof = detector_profile(params.profile);
    const std::size_t h = cache.encoded.extent(1), w = cache.encoded.extent(2);
    const std::size_t fch = prof.fusion_ch;

    // Head: 3x3 sigmoid conv over [sa_out ; up_high].
    const Tensor g_final_concat = conv2d_backward(params.head_final, cache.final_concat,
                                                  cache.final_conv, grad_out,
                                                  grads.at("det.head.final"));
    std::vector<Tensor> head_parts = split_channels(g_final_concat, {fch, fch});
    Tensor& g_sa_out = head_parts[0];
    Tensor g_up_high = std::move(head_parts[1]);

    // Spatial gate: sa_out = low_feat * m.
    Tensor g_low_feat = g_sa_out;
    Tensor g_m = Tensor::zeros({1, h, w});
    {
        const std::size_t plane = h * w;
        for (std::size_t c = 0; c < fch; ++c) {
            const double* gl = g_sa_out.data.data() + c * plane;
            const double* lf = cache.low_feat.data.data() + c * plane;
            double* glf = g_low_feat.data.data() + c * plane;
            for (std::size_t i = 0; i < plane; ++i) {
                g_m.data[i] += gl[i] * lf[i];
                glf[i] = gl[i] * cache.sa_gate.data[i];
            }
        }
        for (std::size_t i = 0; i < plane; ++i) {
            const double m = cache.sa_gate.data[i];
            g_m.data[i] *= m * (1.0 - m);  // through the sigmoid
        }
    }
    add_into(g_up_high, conv2d_backward(params.sa_a, cache.up_high, cache.sa_a_conv, g_m,
                                        grads.at("det.sa.conv9x1")));
    add_into(g_up_high, conv2d_backward(params.sa_b, cache.up_high, cache.sa_b_conv, g_m,
                                        grads.at("det.sa.conv1x9")));

    // High path: upsample <- 1x1 conv <- CA.
    const std::size_t ch = cache.high_summary.extent(1), cw = cache.high_summary.extent(2);
    const Tensor g_high_summary = upsample_bilinear_backward(g_up_high, ch, cw);
    const Tensor g_ca_out = conv2d_backward(params.head_high, cache.ca_out, cache.high_conv,
                                            g_high_summary, grads.at("det.head.high"));

    // Channel gate: ca_out = cpfe_out * gate[c].
    const std::size_t c_cpfe = cache.cpfe_out.extent(0);
    Tensor g_cpfe = g_ca_out;
    Tensor g_gate = Tensor::zeros({c_cpfe});
    {
        const std::size_t plane = ch * cw;
        for (std::size_t c = 0; c < c_cpfe; ++c) {
            const double* go = g_ca_out.data.data() + c * plane;
            const double* f = cache.cpfe_out.data.data() + c * plane;
            double* gf = g_cpfe.data.data() + c * plane;
            double acc = 0.0;
            for (std::size_t i = 0; i < plane; ++i) {
                acc += go[i] * f[i];
                gf[i] = go[i] * cache.ca_gate.data[c];
            }
            g_gate.data[c] = acc;
        }
    }
    const Tensor g_hidden = dense_backward(params.ca_fc2, cache.ca_fc1.output, cache.ca_fc2,
                                           g_gate, grads.at("det.ca.fc2"));
    const Tensor g_pooled = dense_backward(params.ca_fc1, cache.ca_pooled, cache.ca_fc1,
                                           g_hidden, grads.at("det.ca.fc1"));
    add_into(g_cpfe, global_avg_pool_backward(g_pooled, ch, cw));

    // CPFE: split the concat, undo per-branch upsample, backprop each conv.
    std::vector<std::size_t> sizes(12, prof.cpfe_branch_ch);
    std::vector<Tensor> g_branches = split_channels(g_cpfe, sizes);
    Tensor g_c3 = Tensor::zeros(cache.taps.c3.shape);
    Tensor g_c4 = Tensor::zeros(cache.taps.c4.shape);
    Tensor g_c5 = Tensor::zeros(cache.taps.c5.shape);
    const Tensor* cpfe_taps[3] = {&cache.taps.c3, &cache.taps.c4, &cache.taps.c5};
    Tensor* tap_grads[3] = {&g_c3, &g_c4, &g_c5};
    for (std::size_t t = 0; t < 3; ++t) {
        for (std::size_t k = 0; k < 4; ++k) {
            Tensor g_b = std::move(g_branches[t * 4 + k]);
            if (t > 0)
                g_b = upsample_bilinear_backward(g_b, cpfe_taps[t]->extent(1),
                                                 cpfe_taps[t]->extent(2));
            add_into(*tap_grads[t],
                     conv2d_backward(params.cpfe[t * 4 + k], *cpfe_taps[t],
                                     cache.cpfe_convs[t * 4 + k], g_b,
                                     grads.at(kCpfeNames[t * 4 + k])));
        }
    }

    // Low path: 3x3 conv over [c1 ; up(c2)].
    const Tensor g_low_concat = conv2d_backward(params.head_low, cache.low_concat,
                                                cache.low_conv, g_low_feat,
                                                grads.at("det.head.low"));
    std::vector<Tensor> low_parts =
        split_channels(g_low_concat, {prof.stage_ch[0], prof.stage_ch[1]});
    Tensor& g_c1 = low_parts[0];
    const Tensor g_c2 = upsample_bilinear_backward(low_parts[1], cache.taps.c2.extent(1),
                                                   cache.taps.c2.extent(2));

    // Backbone: walk stages in reverse, adding each tap's side gradient where
    // the tap branched off.
    Tensor g = std::move(g_c5);
    auto conv_back = [&](std::size_t i, const Tensor& gin) {
        return conv2d_backward(params.backbone[i], cache.bb_inputs[i], cache.bb_convs[i], gin,
                               grads.at(kBackboneNames[i]));
    };
    for (std::size_t i = 13; i-- > 10;) g = conv_back(i, g);
    g = maxpool2x2_backward(cache.pools[3], g);
    add_into(g, g_c4);
    for (std::size_t i = 10; i-- > 7;) g = conv_back(i, g);
    g = maxpool2x2_backward(cache.pools[2], g);
    add_into(g, g_c3);
    for (std::size_t i = 7; i-- > 4;) g = conv_back(i, g);
    g = maxpool2x2_backward(cache.pools[1], g);
    add_into(g, g_c2);
    for (std::size_t i = 4; i-- > 2;) g = conv_back(i, g);
    g = maxpool2x2_backward(cache.pools[0], g);
    add_into(g, g_c1);
    for (std::size_t i = 2; i-- > 0;) g = conv_back(i, g);
    return g;
}

}  // namespace lfsal
