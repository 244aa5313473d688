#include <cmath>

#include "doctest.h"
#include "lfsal/errors.hpp"
#include "lfsal/fee.hpp"
#include "lfsal/gradcheck.hpp"
#include "lfsal/loss.hpp"
#include "lfsal/rng.hpp"

using namespace lfsal;

namespace {

Tensor random_input(std::size_t h, std::size_t w, std::uint64_t seed) {
    Tensor t = Tensor::zeros({3, h, w});
    Rng rng(seed);
    for (double& v : t.data) v = rng.uniform();
    return t;
}

}  // namespace

TEST_CASE("parameter count equals the closed form") {
    const FeeParams p = build_fee(0x1);
    // per layer: out*in*kh*kw + out
    const std::size_t want = (128 * 3 * 9 * 9 + 128) + (64 * 128 * 3 * 3 + 64) +
                             (32 * 64 * 3 * 3 + 32) + (32 * 32 * 3 * 3 + 32) +
                             (3 * 32 * 1 * 1 + 3);
    CHECK(want == 132835);
    CHECK(fee_param_count(p) == want);
}

TEST_CASE("shape chain on a small multiple-of-18 input") {
    const FeeParams p = build_fee(0x2);
    ShapeLog log;
    const Tensor out = fee_forward(p, random_input(288, 288, 0x3), &log);
    REQUIRE(log.entries.size() == 5);
    CHECK(log.entries[0].second == std::vector<std::size_t>{128, 32, 32});
    CHECK(log.entries[1].second == std::vector<std::size_t>{64, 32, 32});
    CHECK(log.entries[2].second == std::vector<std::size_t>{32, 32, 32});
    CHECK(log.entries[3].second == std::vector<std::size_t>{32, 16, 16});
    CHECK(log.entries[4].second == std::vector<std::size_t>{3, 16, 16});
    CHECK(out.shape == std::vector<std::size_t>{3, 16, 16});
}

TEST_CASE("input extents must divide by the angular pitch") {
    const FeeParams p = build_fee(0x4);
    CHECK_THROWS_AS(fee_forward(p, random_input(100, 99, 0x5)), DimensionError);
}

TEST_CASE("cached forward equals the plain forward bit for bit") {
    const FeeParams p = build_fee(0x6);
    const Tensor in = random_input(90, 72, 0x7);
    FeeCache cache;
    const Tensor a = fee_forward(p, in);
    const Tensor b = fee_forward_cached(p, in, cache);
    CHECK(a.data == b.data);
}

TEST_CASE("each first-layer output reads exactly one 9x9 block") {
    const ReceptiveReport rep = fee_receptive_check(build_fee(0x8), 0x9);
    CHECK(rep.probes >= 20);
    CHECK(rep.confined);
}

TEST_CASE("encoder gradients pass finite differences") {
    FeeParams p = build_fee(0xa);
    const Tensor in = random_input(36, 36, 0xb);
    Tensor target = Tensor::zeros({3, 2, 2});
    Rng trng(0xc);
    for (double& v : target.data) v = trng.uniform(-0.3, 0.3);

    // smooth quadratic head keeps the probe loss differentiable everywhere
    auto loss = [&]() {
        const Tensor out = fee_forward(p, in);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.data.size(); ++i) {
            const double d = out.data[i] - target.data[i];
            acc += 0.5 * d * d;
        }
        return acc;
    };

    FeeCache cache;
    const Tensor out = fee_forward_cached(p, in, cache);
    Tensor g = Tensor::zeros(out.shape);
    for (std::size_t i = 0; i < out.data.size(); ++i) g.data[i] = out.data[i] - target.data[i];
    GradSet grads;
    fee_backward(p, cache, g, grads);

    const char* names[5] = {"fee.L1", "fee.L2", "fee.L3", "fee.L4", "fee.L5"};
    for (std::size_t i = 0; i < 5; ++i) {
        ConvLayer& l = p.layers[i];
        const ConvGrads& lg = grads.by_name.at(names[i]);
        CHECK(finite_difference_check(l.weight, lg.weight, loss, 20, 1e-3, 0x100 + i)
                  .max_rel_err < 1e-4);
        CHECK(finite_difference_check(l.bias, lg.bias, loss, 20, 1e-3, 0x200 + i).max_rel_err <
              1e-4);
    }
}

TEST_CASE("builds are deterministic in the seed") {
    const FeeParams a = build_fee(0xfeed);
    const FeeParams b = build_fee(0xfeed);
    const FeeParams c = build_fee(0xfeee);
    bool all_equal = true, any_diff = false;
    for (std::size_t i = 0; i < 5; ++i) {
        all_equal = all_equal && a.layers[i].weight.data == b.layers[i].weight.data;
        any_diff = any_diff || a.layers[i].weight.data != c.layers[i].weight.data;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}
