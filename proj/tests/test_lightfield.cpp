#include <filesystem>

#include "doctest.h"
#include "lfsal/errors.hpp"
#include "lfsal/lightfield.hpp"
#include "lfsal/rng.hpp"

using namespace lfsal;
namespace fs = std::filesystem;

namespace {

LightField random_field(std::size_t u, std::size_t v, std::size_t s, std::size_t t,
                        std::uint64_t seed) {
    LightField lf = LightField::create(u, v, s, t);
    Rng rng(seed);
    for (Tensor& view : lf.views)
        for (double& x : view.data) x = rng.uniform();
    return lf;
}

bool same_bits(const Tensor& a, const Tensor& b) {
    return a.shape == b.shape && a.data == b.data;
}

}  // namespace

TEST_CASE("micro-lens packing follows the interleave law") {
    const LightField lf = random_field(3, 2, 4, 5, 0x11);
    const MicroLensImage mla = mla_from_sai(lf);
    REQUIRE(mla.width() == 4 * 3);
    REQUIRE(mla.height() == 5 * 2);
    // pixel (s*U+u, t*V+v) must equal sample (u,v,s,t)
    for (std::size_t v = 0; v < 2; ++v)
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t t = 0; t < 5; ++t)
                for (std::size_t s = 0; s < 4; ++s)
                    for (std::size_t c = 0; c < 3; ++c)
                        CHECK(mla.pixels.at3(c, t * 2 + v, s * 3 + u) ==
                              lf.view(u, v).at3(c, t, s));
}

TEST_CASE("pack/unpack roundtrip is bit exact on random fields") {
    Rng dims(0x200);
    for (int it = 0; it < 50; ++it) {
        const std::size_t u = 1 + dims.uniform_index(9), v = 1 + dims.uniform_index(9);
        const std::size_t s = 2 + dims.uniform_index(31), t = 2 + dims.uniform_index(31);
        const LightField lf = random_field(u, v, s, t, dims.next_u64());
        const LightField back = sai_from_mla(mla_from_sai(lf), u, v);
        REQUIRE(back.views.size() == lf.views.size());
        for (std::size_t i = 0; i < lf.views.size(); ++i)
            CHECK(same_bits(back.views[i], lf.views[i]));
    }
}

TEST_CASE("unpack rejects non-divisible extents") {
    MicroLensImage mla;
    mla.pixels = Tensor::zeros({3, 10, 10});
    mla.ang_u = 3;
    mla.ang_v = 3;
    CHECK_THROWS_AS(sai_from_mla(mla, 3, 3), DimensionError);
}

TEST_CASE("field validation flags out-of-range samples") {
    LightField lf = random_field(2, 2, 4, 4, 0x31);
    CHECK_NOTHROW(validate_lightfield(lf));
    lf.view(0, 0).at3(0, 0, 0) = 1.5;
    CHECK_THROWS_AS(validate_lightfield(lf), NumericError);
}

TEST_CASE("quarter rotation of the field equals rotating the packed image") {
    const LightField lf = random_field(9, 9, 6, 6, 0x44);
    const Tensor packed = mla_from_sai(lf).pixels;

    const LightField q = rotate_lf(lf, Rotation::Quarter);
    CHECK(same_bits(mla_from_sai(q).pixels, rotate90_image(packed)));

    const LightField h = rotate_lf(lf, Rotation::Half);
    CHECK(same_bits(mla_from_sai(h).pixels, rotate180_image(packed)));

    const LightField tq = rotate_lf(lf, Rotation::ThreeQuarter);
    CHECK(same_bits(mla_from_sai(tq).pixels,
                    rotate90_image(rotate90_image(rotate90_image(packed)))));
}

TEST_CASE("four quarter turns restore the field") {
    const LightField lf = random_field(5, 5, 4, 4, 0x55);
    LightField r = lf;
    for (int i = 0; i < 4; ++i) r = rotate_lf(r, Rotation::Quarter);
    for (std::size_t i = 0; i < lf.views.size(); ++i) CHECK(same_bits(r.views[i], lf.views[i]));
}

TEST_CASE("quarter rotation needs a square angular grid") {
    const LightField lf = random_field(3, 2, 4, 4, 0x56);
    CHECK_THROWS_AS(rotate_lf(lf, Rotation::Quarter), DimensionError);
    CHECK_NOTHROW(rotate_lf(lf, Rotation::Half));
}

TEST_CASE("spatial resize keeps constants and the angular grid") {
    LightField lf = LightField::create(3, 3, 5, 4);
    for (Tensor& v : lf.views)
        for (double& x : v.data) x = 0.625;
    const LightField r = resize_spatial(lf, 8, 10);
    CHECK(r.ang_u == 3);
    CHECK(r.spat_s == 8);
    CHECK(r.spat_t == 10);
    for (const Tensor& v : r.views) {
        REQUIRE(v.shape == std::vector<std::size_t>{3, 10, 8});
        for (double x : v.data) CHECK(x == doctest::Approx(0.625).epsilon(1e-12));
    }
}

TEST_CASE("width crops sit at the documented offsets") {
    // synthetic 4860-wide packed image, U=V=9: k = floor(252/3)=84 -> 81
    const std::size_t S = 540, U = 9;
    MicroLensImage mla;
    mla.ang_u = U;
    mla.ang_v = 9;
    mla.pixels = Tensor::zeros({3, 9, S * U});
    for (std::size_t x = 0; x < S * U; ++x)
        for (std::size_t y = 0; y < 9; ++y)
            for (std::size_t c = 0; c < 3; ++c)
                mla.pixels.at3(c, y, x) = (double)x / (double)(S * U);

    const std::vector<MicroLensImage> crops = crop_mla_four(mla);
    REQUIRE(crops.size() == 4);
    const std::size_t offsets[4] = {0, 81, 162, 243};
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(crops[i].width() == 4608);
        CHECK(crops[i].ang_u == U);
        CHECK(offsets[i] % U == 0);  // angular blocks stay aligned
        for (std::size_t x = 0; x < 4608; x += 97)
            CHECK(crops[i].pixels.at3(0, 4, x) == mla.pixels.at3(0, 4, x + offsets[i]));
    }
}

TEST_CASE("centre view is the middle of the grid") {
    const LightField lf = random_field(9, 9, 4, 4, 0x77);
    CHECK(same_bits(center_view(lf), lf.view(4, 4)));
}

TEST_CASE("packed-image save/load roundtrip within 8-bit quantization") {
    const fs::path dir = fs::temp_directory_path() / "lfsal_lf_t1";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const LightField lf = random_field(3, 3, 6, 6, 0x88);
    save_lightfield_mla((dir / "f.png").string(), lf);
    CHECK(fs::exists(dir / "f.meta"));
    const LightField back = load_lightfield((dir / "f.png").string());
    REQUIRE(back.ang_u == 3);
    REQUIRE(back.spat_s == 6);
    for (std::size_t i = 0; i < lf.views.size(); ++i)
        for (std::size_t j = 0; j < lf.views[i].data.size(); ++j)
            CHECK(std::fabs(back.views[i].data[j] - lf.views[i].data[j]) <= 0.5 / 255.0 + 1e-12);
    fs::remove_all(dir);
}

TEST_CASE("view-directory save/load matches the packed path bit for bit") {
    const fs::path dir = fs::temp_directory_path() / "lfsal_lf_t2";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const LightField lf = random_field(3, 2, 5, 4, 0x99);
    save_lightfield_mla((dir / "f.png").string(), lf);
    save_lightfield_views((dir / "views").string(), lf);
    const LightField a = load_lightfield((dir / "f.png").string());
    const LightField b = load_lightfield((dir / "views").string());
    REQUIRE(a.views.size() == b.views.size());
    for (std::size_t i = 0; i < a.views.size(); ++i) CHECK(same_bits(a.views[i], b.views[i]));
    fs::remove_all(dir);
}

TEST_CASE("loader rejects a missing sidecar and an incomplete view grid") {
    const fs::path dir = fs::temp_directory_path() / "lfsal_lf_t3";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const LightField lf = random_field(2, 2, 4, 4, 0xaa);
    save_lightfield_mla((dir / "f.png").string(), lf);
    fs::remove(dir / "f.meta");
    CHECK_THROWS_AS(load_lightfield((dir / "f.png").string()), FormatError);

    save_lightfield_views((dir / "views").string(), lf);
    fs::remove(dir / "views" / "view_1_1.png");
    CHECK_THROWS_AS(load_lightfield((dir / "views").string()), FormatError);
    fs::remove_all(dir);
}
