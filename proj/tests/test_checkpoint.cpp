#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "doctest.h"
#include "lfsal/checkpoint.hpp"
#include "lfsal/errors.hpp"
#include "lfsal/pipeline.hpp"
#include "lfsal/rng.hpp"

using namespace lfsal;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const char* name) {
    return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("checkpoint roundtrip preserves every bit") {
    std::map<std::string, Tensor> tensors;
    Rng rng(0xc4);
    tensors["a"] = Tensor::zeros({3, 4});
    tensors["b.deep.name"] = Tensor::zeros({2, 2, 2, 2});
    tensors["c"] = Tensor::zeros({7});
    for (auto& [name, t] : tensors)
        for (double& v : t.data) v = rng.normal() * 1e3;
    tensors["c"].data[0] = 5e-324;           // denormal
    tensors["c"].data[1] = -0.0;
    tensors["c"].data[2] = 1.7976931348623157e308;

    const fs::path path = tmp_file("lfsal_ckpt_rt.bin");
    save_checkpoint(path.string(), tensors);
    const std::map<std::string, Tensor> back = load_checkpoint(path.string());
    REQUIRE(back.size() == tensors.size());
    for (const auto& [name, t] : tensors) {
        REQUIRE(back.count(name) == 1);
        CHECK(back.at(name).shape == t.shape);
        CHECK(back.at(name).data == t.data);
    }
    fs::remove(path);
}

TEST_CASE("corrupt files are rejected") {
    const fs::path path = tmp_file("lfsal_ckpt_bad.bin");
    std::map<std::string, Tensor> tensors;
    tensors["x"] = Tensor::full({4}, 1.0);
    save_checkpoint(path.string(), tensors);

    SUBCASE("bad magic") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXXXX", 6);
        f.close();
        CHECK_THROWS_AS(load_checkpoint(path.string()), FormatError);
    }
    SUBCASE("truncated payload") {
        const auto size = fs::file_size(path);
        fs::resize_file(path, size - 9);
        CHECK_THROWS_AS(load_checkpoint(path.string()), FormatError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_checkpoint((path.string() + ".nope")), FormatError);
    }
    fs::remove(path);
}

TEST_CASE("model save/load keeps behaviour identical") {
    const PipelineModel model = build_pipeline(Profile::Toy, 0x1234);
    const fs::path path = tmp_file("lfsal_ckpt_model.bin");
    save_model(path.string(), model);
    const PipelineModel back = load_model(path.string());
    CHECK(back.profile == model.profile);
    CHECK(back.baseline == model.baseline);
    CHECK(back.spatial_target == model.spatial_target);

    LightField lf = LightField::create(9, 9, 32, 32);
    Rng rng(0x55);
    for (Tensor& v : lf.views)
        for (double& x : v.data) x = rng.uniform();
    const Tensor a = pipeline_forward(model, lf);
    const Tensor b = pipeline_forward(back, lf);
    CHECK(a.data == b.data);
    fs::remove(path);
}

TEST_CASE("model loader rejects missing and unknown tensors") {
    const PipelineModel model = build_pipeline(Profile::Toy, 0x1);
    const fs::path path = tmp_file("lfsal_ckpt_meddle.bin");

    save_model(path.string(), model);
    std::map<std::string, Tensor> tensors = load_checkpoint(path.string());

    SUBCASE("missing tensor") {
        tensors.erase("det.head.final.w");
        save_checkpoint(path.string(), tensors);
        CHECK_THROWS_AS(load_model(path.string()), FormatError);
    }
    SUBCASE("unknown tensor") {
        tensors["det.head.extra.w"] = Tensor::full({1}, 0.0);
        save_checkpoint(path.string(), tensors);
        CHECK_THROWS_AS(load_model(path.string()), FormatError);
    }
    SUBCASE("wrong shape") {
        tensors["det.head.final.b"] = Tensor::full({2}, 0.0);
        save_checkpoint(path.string(), tensors);
        CHECK_THROWS_AS(load_model(path.string()), FormatError);
    }
    fs::remove(path);
}

TEST_CASE("file layout starts with the magic") {
    const fs::path path = tmp_file("lfsal_ckpt_magic.bin");
    std::map<std::string, Tensor> tensors;
    tensors["t"] = Tensor::full({1}, 2.0);
    save_checkpoint(path.string(), tensors);
    std::ifstream f(path, std::ios::binary);
    char magic[6];
    f.read(magic, 6);
    CHECK(std::string(magic, 6) == "LFSAL1");
    fs::remove(path);
}
