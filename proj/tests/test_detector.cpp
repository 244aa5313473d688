#include <cmath>

#include "doctest.h"
#include "lfsal/detector.hpp"
#include "lfsal/errors.hpp"
#include "lfsal/gradcheck.hpp"
#include "lfsal/rng.hpp"

using namespace lfsal;

namespace {

Tensor random_image(std::size_t h, std::size_t w, std::uint64_t seed, double lo = -0.5,
                    double hi = 0.5) {
    Tensor t = Tensor::zeros({3, h, w});
    Rng rng(seed);
    for (double& v : t.data) v = rng.uniform(lo, hi);
    return t;
}

}  // namespace

TEST_CASE("forward shapes, square and not") {
    const DetectorParams p = build_detector(Profile::Toy, 0x1);
    const Tensor a = detector_forward(p, random_image(32, 32, 0x2));
    CHECK(a.shape == std::vector<std::size_t>{1, 32, 32});
    const Tensor b = detector_forward(p, random_image(48, 32, 0x3));
    CHECK(b.shape == std::vector<std::size_t>{1, 48, 32});
    for (double v : a.data) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("input must be >= 16 and divisible by 16") {
    const DetectorParams p = build_detector(Profile::Toy, 0x4);
    CHECK_THROWS_AS(detector_forward(p, random_image(20, 32, 0x5)), DimensionError);
    CHECK_THROWS_AS(detector_forward(p, random_image(8, 8, 0x6)), DimensionError);
    CHECK_NOTHROW(detector_forward(p, random_image(16, 16, 0x7)));
}

TEST_CASE("full profile wires up at the published widths") {
    const DetectorParams p = build_detector(Profile::Full, 0x8);
    ShapeLog log;
    const Tensor out = detector_forward(p, random_image(32, 32, 0x9), &log);
    CHECK(out.shape == std::vector<std::size_t>{1, 32, 32});
    bool saw_c5 = false, saw_cpfe = false;
    for (const auto& [label, shape] : log.entries) {
        if (label == "backbone.conv5_3") {
            saw_c5 = true;
            CHECK(shape == std::vector<std::size_t>{512, 2, 2});
        }
        if (label == "cpfe") {
            saw_cpfe = true;
            CHECK(shape == std::vector<std::size_t>{384, 8, 8});
        }
    }
    CHECK(saw_c5);
    CHECK(saw_cpfe);
}

TEST_CASE("backbone taps sit at the documented strides") {
    const DetectorParams p = build_detector(Profile::Toy, 0xa);
    const BackboneTaps taps = backbone_forward(p, random_image(64, 48, 0xb));
    CHECK(taps.c1.shape == std::vector<std::size_t>{16, 64, 48});
    CHECK(taps.c2.shape == std::vector<std::size_t>{32, 32, 24});
    CHECK(taps.c3.shape == std::vector<std::size_t>{64, 16, 12});
    CHECK(taps.c4.shape == std::vector<std::size_t>{64, 8, 6});
    CHECK(taps.c5.shape == std::vector<std::size_t>{64, 4, 3});
}

TEST_CASE("pyramid output concatenates four branches per tap on the c3 grid") {
    const DetectorParams p = build_detector(Profile::Toy, 0xc);
    const BackboneTaps taps = backbone_forward(p, random_image(32, 32, 0xd));
    const Tensor f = cpfe_forward(p, taps.c3, taps.c4, taps.c5);
    // 3 taps x 4 branches x 8 channels, at c3 resolution
    CHECK(f.shape == std::vector<std::size_t>{96, 8, 8});
}

TEST_CASE("channel gate matches a direct computation") {
    const DetectorParams p = build_detector(Profile::Toy, 0xe);
    Rng rng(0xf);
    Tensor f = Tensor::zeros({96, 4, 4});
    for (double& v : f.data) v = rng.uniform(-1.0, 1.0);

    const Tensor gate = channel_gate(p, f);
    REQUIRE(gate.shape == std::vector<std::size_t>{96});

    // by hand: GAP -> fc1 relu -> fc2 sigmoid
    std::vector<double> pooled(96, 0.0);
    for (std::size_t c = 0; c < 96; ++c) {
        for (std::size_t i = 0; i < 16; ++i) pooled[c] += f.data[c * 16 + i];
        pooled[c] /= 16.0;
    }
    const std::size_t hidden = p.ca_fc1.bias.numel();
    std::vector<double> mid(hidden, 0.0);
    for (std::size_t o = 0; o < hidden; ++o) {
        double acc = p.ca_fc1.bias.data[o];
        for (std::size_t i = 0; i < 96; ++i) acc += p.ca_fc1.weight.data[o * 96 + i] * pooled[i];
        mid[o] = std::max(0.0, acc);
    }
    for (std::size_t o = 0; o < 96; ++o) {
        double acc = p.ca_fc2.bias.data[o];
        for (std::size_t i = 0; i < hidden; ++i)
            acc += p.ca_fc2.weight.data[o * hidden + i] * mid[i];
        CHECK(gate.data[o] == doctest::Approx(1.0 / (1.0 + std::exp(-acc))).epsilon(1e-12));
    }

    const Tensor gated = channel_attention(p, f);
    for (std::size_t c = 0; c < 96; ++c)
        for (std::size_t i = 0; i < 16; ++i)
            CHECK(gated.data[c * 16 + i] ==
                  doctest::Approx(gate.data[c] * f.data[c * 16 + i]).epsilon(1e-12));
}

TEST_CASE("squeeze width is a quarter of the pyramid width") {
    const DetectorParams toy = build_detector(Profile::Toy, 0x10);
    CHECK(toy.ca_fc1.weight.shape == std::vector<std::size_t>{24, 96});
    CHECK(toy.ca_fc2.weight.shape == std::vector<std::size_t>{96, 24});
    const DetectorParams full = build_detector(Profile::Full, 0x11);
    CHECK(full.ca_fc1.weight.shape == std::vector<std::size_t>{96, 384});
    CHECK(full.ca_fc2.weight.shape == std::vector<std::size_t>{384, 96});
}

TEST_CASE("spatial gate uses the summed cross kernels through a sigmoid") {
    const DetectorParams p = build_detector(Profile::Toy, 0x12);
    Rng rng(0x13);
    Tensor hs = Tensor::zeros({16, 4, 4});  // fusion-width summary at quarter scale
    for (double& v : hs.data) v = rng.uniform(-1.0, 1.0);

    const Tensor gate = spatial_gate(p, hs, 16, 16);
    REQUIRE(gate.shape == std::vector<std::size_t>{1, 16, 16});

    const Tensor up = upsample_bilinear(hs, 16, 16);
    const Tensor a = conv2d_forward(p.sa_a, up);
    const Tensor b = conv2d_forward(p.sa_b, up);
    for (std::size_t i = 0; i < gate.data.size(); ++i) {
        const double want = 1.0 / (1.0 + std::exp(-(a.data[i] + b.data[i])));
        CHECK(gate.data[i] == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(p.sa_a.spec.kernel_h == 9);
    CHECK(p.sa_a.spec.kernel_w == 1);
    CHECK(p.sa_b.spec.kernel_h == 1);
    CHECK(p.sa_b.spec.kernel_w == 9);
}

TEST_CASE("cached forward equals plain forward bit for bit") {
    const DetectorParams p = build_detector(Profile::Toy, 0x14);
    const Tensor in = random_image(32, 48, 0x15);
    DetectorCache cache;
    const Tensor a = detector_forward(p, in);
    const Tensor b = detector_forward_cached(p, in, cache);
    CHECK(a.data == b.data);
}

TEST_CASE("detector gradients pass finite differences") {
    DetectorParams p = build_detector(Profile::Toy, 0x16);
    Tensor in = random_image(16, 16, 0x17, 0.0, 1.0);
    Tensor lin = Tensor::zeros({1, 16, 16});
    Rng rng(0x18);
    for (double& v : lin.data) v = rng.uniform(-1.0, 1.0);

    auto loss = [&]() {
        const Tensor out = detector_forward(p, in);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.data.size(); ++i) acc += lin.data[i] * out.data[i];
        return acc;
    };

    DetectorCache cache;
    detector_forward_cached(p, in, cache);
    GradSet grads;
    const Tensor g_in = detector_backward(p, cache, lin, grads);

    CHECK(finite_difference_check(in, g_in, loss, 20, 1e-3, 0x20).max_rel_err < 1e-4);

    // one tensor from every distinct wiring block
    struct Probe {
        const char* name;
        Tensor* weight;
        Tensor* bias;
    };
    const Probe probes[] = {
        {"det.backbone.s1c1", &p.backbone[0].weight, &p.backbone[0].bias},
        {"det.backbone.s3c2", &p.backbone[5].weight, &p.backbone[5].bias},
        {"det.backbone.s5c3", &p.backbone[12].weight, &p.backbone[12].bias},
        {"det.cpfe.c3.k1", &p.cpfe[0].weight, &p.cpfe[0].bias},
        {"det.cpfe.c4.d5", &p.cpfe[6].weight, &p.cpfe[6].bias},
        {"det.cpfe.c5.d7", &p.cpfe[11].weight, &p.cpfe[11].bias},
        {"det.ca.fc1", &p.ca_fc1.weight, &p.ca_fc1.bias},
        {"det.ca.fc2", &p.ca_fc2.weight, &p.ca_fc2.bias},
        {"det.sa.conv9x1", &p.sa_a.weight, &p.sa_a.bias},
        {"det.sa.conv1x9", &p.sa_b.weight, &p.sa_b.bias},
        {"det.head.low", &p.head_low.weight, &p.head_low.bias},
        {"det.head.high", &p.head_high.weight, &p.head_high.bias},
        {"det.head.final", &p.head_final.weight, &p.head_final.bias},
    };
    std::uint64_t probe_seed = 0x30;
    for (const Probe& probe : probes) {
        const std::string pname = probe.name;
        CAPTURE(pname);
        REQUIRE(grads.by_name.count(probe.name) == 1);
        const ConvGrads& g = grads.by_name.at(probe.name);
        CHECK(finite_difference_check(*probe.weight, g.weight, loss, 20, 1e-3, ++probe_seed)
                  .max_rel_err < 1e-4);
        CHECK(finite_difference_check(*probe.bias, g.bias, loss, 20, 1e-3, ++probe_seed)
                  .max_rel_err < 1e-4);
    }
}

TEST_CASE("parameter names cover every tensor exactly once") {
    DetectorParams p = build_detector(Profile::Toy, 0x19);
    ParamSet set = detector_params(p);
    CHECK(set.size() == 13 + 12 + 2 + 2 + 3);
    std::size_t count = 0;
    for (const ParamRef& r : set) count += r.weight->numel() + r.bias->numel();
    CHECK(count == detector_param_count(p));
}
