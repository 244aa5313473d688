#include <cmath>

#include "doctest.h"
#include "lfsal/errors.hpp"
#include "lfsal/gradcheck.hpp"
#include "lfsal/loss.hpp"
#include "lfsal/optimizer.hpp"
#include "lfsal/rng.hpp"

using namespace lfsal;

TEST_CASE("single-pixel cross-entropy values") {
    Tensor p = Tensor::full({1, 1, 1}, 0.5);
    Tensor y1 = Tensor::full({1, 1, 1}, 1.0);
    Tensor y0 = Tensor::full({1, 1, 1}, 0.0);
    const double ln2 = std::log(2.0);
    CHECK(weighted_bce_loss(p, y1, 0.528).loss == doctest::Approx(0.528 * ln2).epsilon(1e-12));
    CHECK(weighted_bce_loss(p, y0, 0.528).loss == doctest::Approx(0.472 * ln2).epsilon(1e-12));

    // perfect predictions cost (numerically) nothing
    Tensor sure = Tensor::full({1, 2, 2}, 1.0);
    Tensor ally = Tensor::full({1, 2, 2}, 1.0);
    CHECK(weighted_bce_loss(sure, ally, 0.528).loss < 1e-5);
}

TEST_CASE("loss is the mean over all pixels") {
    Rng rng(0x10);
    Tensor p = Tensor::zeros({1, 3, 5});
    Tensor y = Tensor::zeros({1, 3, 5});
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        p.data[i] = rng.uniform(0.05, 0.95);
        y.data[i] = rng.uniform() < 0.4 ? 1.0 : 0.0;
    }
    const double alpha = 0.528;
    double want = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i)
        want -= alpha * y.data[i] * std::log(p.data[i]) +
                (1.0 - alpha) * (1.0 - y.data[i]) * std::log(1.0 - p.data[i]);
    want /= (double)p.data.size();
    CHECK(weighted_bce_loss(p, y, alpha).loss == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("loss gradient agrees with finite differences") {
    Rng rng(0x11);
    Tensor p = Tensor::zeros({1, 4, 4});
    Tensor y = Tensor::zeros({1, 4, 4});
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        p.data[i] = rng.uniform(0.1, 0.9);
        y.data[i] = rng.uniform() < 0.5 ? 1.0 : 0.0;
    }
    LossResult r = weighted_bce_loss(p, y, 0.528);
    auto loss = [&]() { return weighted_bce_loss(p, y, 0.528).loss; };
    CHECK(finite_difference_check(p, r.grad, loss, 20, 1e-3, 77).max_rel_err < 1e-4);
}

TEST_CASE("loss rejects non-binary targets and mismatched shapes") {
    Tensor p = Tensor::full({1, 2, 2}, 0.5);
    Tensor y = Tensor::full({1, 2, 2}, 0.3);
    CHECK_THROWS_AS(weighted_bce_loss(p, y, 0.528), NumericError);
    Tensor y2 = Tensor::full({1, 2, 3}, 1.0);
    CHECK_THROWS_AS(weighted_bce_loss(p, y2, 0.528), DimensionError);
}

TEST_CASE("clamped saturated predictions keep the loss finite") {
    Tensor p = Tensor::zeros({1, 1, 2});
    p.data = {0.0, 1.0};
    Tensor y = Tensor::zeros({1, 1, 2});
    y.data = {1.0, 0.0};
    const LossResult r = weighted_bce_loss(p, y, 0.528);
    CHECK(std::isfinite(r.loss));
    for (double g : r.grad.data) CHECK(std::isfinite(g));
}

TEST_CASE("momentum step matches a hand-unrolled recurrence") {
    Tensor w = Tensor::zeros({2});
    w.data = {1.0, -2.0};
    Tensor b = Tensor::zeros({1});
    b.data = {0.5};
    ParamSet params{{"layer", &w, &b}};

    GradSet grads;
    grads.at("layer").weight = Tensor::zeros({2});
    grads.at("layer").bias = Tensor::zeros({1});
    grads.at("layer").weight.data = {0.1, -0.2};
    grads.at("layer").bias.data = {0.3};

    SgdState state;
    const double lr = 0.5, m = 0.9;
    double vw0 = 0.0, vw1 = 0.0, vb = 0.0, w0 = 1.0, w1 = -2.0, bb = 0.5;
    for (int step = 0; step < 3; ++step) {
        sgd_momentum_step(params, grads, state, lr, m);
        vw0 = m * vw0 + 0.1;
        vw1 = m * vw1 - 0.2;
        vb = m * vb + 0.3;
        w0 -= lr * vw0;
        w1 -= lr * vw1;
        bb -= lr * vb;
        CHECK(w.data[0] == doctest::Approx(w0).epsilon(1e-14));
        CHECK(w.data[1] == doctest::Approx(w1).epsilon(1e-14));
        CHECK(b.data[0] == doctest::Approx(bb).epsilon(1e-14));
    }
}

TEST_CASE("parameters without gradients stay bit identical") {
    Tensor w1 = Tensor::full({3}, 1.25);
    Tensor b1 = Tensor::full({1}, -0.5);
    Tensor w2 = Tensor::full({2}, 2.0);
    Tensor b2 = Tensor::full({1}, 0.125);
    ParamSet params{{"hot", &w1, &b1}, {"frozen", &w2, &b2}};

    GradSet grads;
    grads.at("hot").weight = Tensor::full({3}, 1.0);
    grads.at("hot").bias = Tensor::full({1}, 1.0);

    SgdState state;
    sgd_momentum_step(params, grads, state, 0.1, 0.9);
    CHECK(w1.data[0] == doctest::Approx(1.15));
    CHECK(w2.data == std::vector<double>{2.0, 2.0});
    CHECK(b2.data == std::vector<double>{0.125});
    CHECK(state.velocity.count("frozen") == 0);
}

TEST_CASE("duplicate parameter names are rejected") {
    Tensor w = Tensor::zeros({1}), b = Tensor::zeros({1});
    ParamSet params{{"dup", &w, &b}, {"dup", &w, &b}};
    GradSet grads;
    SgdState state;
    CHECK_THROWS_AS(sgd_momentum_step(params, grads, state, 0.1, 0.9), DimensionError);
}
