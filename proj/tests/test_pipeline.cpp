#include "doctest.h"
#include "lfsal/errors.hpp"
#include "lfsal/pipeline.hpp"
#include "lfsal/rng.hpp"

using namespace lfsal;

namespace {

LightField random_field(std::size_t s, std::size_t t, std::uint64_t seed) {
    LightField lf = LightField::create(9, 9, s, t);
    Rng rng(seed);
    for (Tensor& v : lf.views)
        for (double& x : v.data) x = rng.uniform();
    return lf;
}

}  // namespace

TEST_CASE("toy pipeline produces a half-size map") {
    const PipelineModel m = build_pipeline(Profile::Toy, 0x1);
    CHECK(m.spatial_target == 32);
    const Tensor p = pipeline_forward(m, random_field(32, 32, 0x2));
    CHECK(p.shape == std::vector<std::size_t>{1, 16, 16});
}

TEST_CASE("odd-size fields are resized into the working grid") {
    const PipelineModel m = build_pipeline(Profile::Toy, 0x3);
    const Tensor p = pipeline_forward(m, random_field(24, 17, 0x4));
    CHECK(p.shape == std::vector<std::size_t>{1, 16, 16});
}

TEST_CASE("pipeline needs the 9x9 angular grid") {
    const PipelineModel m = build_pipeline(Profile::Toy, 0x5);
    LightField lf = LightField::create(5, 5, 32, 32);
    CHECK_THROWS_AS(pipeline_forward(m, lf), DimensionError);
}

TEST_CASE("baseline model detects on the centre view alone") {
    const PipelineModel m = build_pipeline(Profile::Toy, 0x6, true);
    const Tensor p = pipeline_forward(m, random_field(32, 32, 0x7));
    CHECK(p.shape == std::vector<std::size_t>{1, 16, 16});
    ParamSet set = model_params(const_cast<PipelineModel&>(m));
    for (const ParamRef& r : set) CHECK(r.name.rfind("fee.", 0) != 0);
}

TEST_CASE("working size must be a multiple of 32") {
    CHECK_THROWS_AS(build_pipeline(Profile::Toy, 0x8, false, 48), DimensionError);
    const PipelineModel m = build_pipeline(Profile::Toy, 0x8, false, 64);
    CHECK(m.spatial_target == 64);
    const Tensor p = pipeline_forward(m, random_field(64, 64, 0x9));
    CHECK(p.shape == std::vector<std::size_t>{1, 32, 32});
}

TEST_CASE("instrumented MAC count equals the closed form") {
    for (const bool baseline : {false, true}) {
        const PipelineModel m = build_pipeline(Profile::Toy, 0xa, baseline);
        mac_counter_reset();
        pipeline_forward(m, random_field(32, 32, 0xb));
        CHECK(mac_counter_read() == analytic_macs(m));
    }
}

TEST_CASE("first encoder layer at camera scale costs the documented MACs") {
    CHECK(conv_out_extent(4608, 9, 9, 1, Padding::Valid) == 512);
    const std::uint64_t l1 = 128ull * 3 * 9 * 9 * 512 * 512;
    CHECK(l1 == 8153726976ull);
}

TEST_CASE("same seed, same model, same output") {
    const PipelineModel a = build_pipeline(Profile::Toy, 0xc);
    const PipelineModel b = build_pipeline(Profile::Toy, 0xc);
    const LightField lf = random_field(32, 32, 0xd);
    CHECK(pipeline_forward(a, lf).data == pipeline_forward(b, lf).data);
    const PipelineModel c = build_pipeline(Profile::Toy, 0xe);
    CHECK(pipeline_forward(a, lf).data != pipeline_forward(c, lf).data);
}

TEST_CASE("shape log names the encode and detect stages") {
    const PipelineModel m = build_pipeline(Profile::Toy, 0xf);
    ShapeLog log;
    pipeline_forward(m, random_field(32, 32, 0x10), &log);
    bool saw_mla = false, saw_l5 = false, saw_sal = false;
    for (const auto& [label, shape] : log.entries) {
        if (label == "mla") {
            saw_mla = true;
            CHECK(shape == std::vector<std::size_t>{3, 288, 288});
        }
        if (label == "fee.L5") {
            saw_l5 = true;
            CHECK(shape == std::vector<std::size_t>{3, 16, 16});
        }
        if (label == "saliency") {
            saw_sal = true;
            CHECK(shape == std::vector<std::size_t>{1, 16, 16});
        }
    }
    CHECK(saw_mla);
    CHECK(saw_l5);
    CHECK(saw_sal);
}
