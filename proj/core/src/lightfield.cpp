#include "lfsal/lightfield.hpp"

#include <filesystem>
#include <fstream>

#include "lfsal/layers.hpp"
#include "lfsal/png_io.hpp"

namespace fs = std::filesystem;

namespace lfsal {
namespace {

constexpr std::size_t kCropWidth = 4608;

void check_range(const Tensor& t, const std::string& where) {
    for (double v : t.data) {
        if (!(v >= 0.0 && v <= 1.0))
            throw NumericError(where + ": sample outside [0,1]");
    }
}

}  // namespace

LightField LightField::create(std::size_t u, std::size_t v, std::size_t s, std::size_t t) {
    if (u == 0 || v == 0 || s == 0 || t == 0)
        throw DimensionError("light field extents must be positive");
    LightField lf;
    lf.ang_u = u;
    lf.ang_v = v;
    lf.spat_s = s;
    lf.spat_t = t;
    lf.views.assign(u * v, Tensor::zeros({3, t, s}));
    return lf;
}

void validate_lightfield(const LightField& lf) {
    if (lf.ang_u == 0 || lf.ang_v == 0 || lf.spat_s == 0 || lf.spat_t == 0)
        throw DimensionError("light field extents must be positive");
    if (lf.views.size() != lf.ang_u * lf.ang_v)
        throw DimensionError("light field holds " + std::to_string(lf.views.size()) +
                             " views, expected " + std::to_string(lf.ang_u * lf.ang_v));
    for (const Tensor& v : lf.views) {
        if (v.rank() != 3 || v.extent(0) != 3 || v.extent(1) != lf.spat_t ||
            v.extent(2) != lf.spat_s)
            throw DimensionError("view shape " + shape_str(v.shape) + " does not match field");
        check_range(v, "light field");
    }
}

MicroLensImage mla_from_sai(const LightField& lf) {
    const std::size_t u_n = lf.ang_u, v_n = lf.ang_v, s_n = lf.spat_s, t_n = lf.spat_t;
    MicroLensImage out;
    out.ang_u = u_n;
    out.ang_v = v_n;
    out.pixels = Tensor({3, t_n * v_n, s_n * u_n});
    for (std::size_t v = 0; v < v_n; ++v) {
        for (std::size_t u = 0; u < u_n; ++u) {
            const Tensor& view = lf.view(u, v);
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t t = 0; t < t_n; ++t)
                    for (std::size_t s = 0; s < s_n; ++s)
                        out.pixels.at3(c, t * v_n + v, s * u_n + u) = view.at3(c, t, s);
        }
    }
    return out;
}

LightField sai_from_mla(const MicroLensImage& mla, std::size_t u, std::size_t v) {
    if (mla.pixels.rank() != 3 || mla.pixels.extent(0) != 3)
        throw DimensionError("micro-lens image must be [3,H,W]");
    const std::size_t w = mla.width(), h = mla.height();
    if (u == 0 || v == 0 || w % u != 0 || h % v != 0)
        throw DimensionError("image " + std::to_string(w) + "x" + std::to_string(h) +
                             " not divisible by angular grid " + std::to_string(u) + "x" +
                             std::to_string(v));
    LightField lf = LightField::create(u, v, w / u, h / v);
    for (std::size_t vv = 0; vv < v; ++vv) {
        for (std::size_t uu = 0; uu < u; ++uu) {
            Tensor& view = lf.view(uu, vv);
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t t = 0; t < lf.spat_t; ++t)
                    for (std::size_t s = 0; s < lf.spat_s; ++s)
                        view.at3(c, t, s) = mla.pixels.at3(c, t * v + vv, s * u + uu);
        }
    }
    return lf;
}

std::vector<MicroLensImage> crop_mla_four(const MicroLensImage& mla) {
    const std::size_t w = mla.width(), h = mla.height();
    if (w < kCropWidth)
        throw DimensionError("image width " + std::to_string(w) + " below crop width " +
                             std::to_string(kCropWidth));
    std::size_t k = (w - kCropWidth) / 3;
    k -= k % mla.ang_u;  // keep crop starts on block boundaries
    std::vector<MicroLensImage> crops;
    for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t off = i * k;
        MicroLensImage crop;
        crop.ang_u = mla.ang_u;
        crop.ang_v = mla.ang_v;
        crop.pixels = Tensor({3, h, kCropWidth});
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t y = 0; y < h; ++y) {
                const double* src = mla.pixels.data.data() + (c * h + y) * w + off;
                double* dst = crop.pixels.data.data() + (c * h + y) * kCropWidth;
                std::copy(src, src + kCropWidth, dst);
            }
        crops.push_back(std::move(crop));
    }
    return crops;
}

LightField resize_spatial(const LightField& lf, std::size_t s2, std::size_t t2) {
    if (s2 < 2 || t2 < 2) throw DimensionError("resize target must be at least 2x2");
    LightField out;
    out.ang_u = lf.ang_u;
    out.ang_v = lf.ang_v;
    out.spat_s = s2;
    out.spat_t = t2;
    out.views.reserve(lf.views.size());
    for (const Tensor& v : lf.views) out.views.push_back(upsample_bilinear(v, t2, s2));
    return out;
}

Tensor rotate90_image(const Tensor& img) {
    const std::size_t c_n = img.extent(0), h = img.extent(1), w = img.extent(2);
    Tensor out({c_n, w, h});
    for (std::size_t c = 0; c < c_n; ++c)
        for (std::size_t nr = 0; nr < w; ++nr)
            for (std::size_t nc = 0; nc < h; ++nc)
                out.at3(c, nr, nc) = img.at3(c, nc, w - 1 - nr);
    return out;
}

Tensor rotate180_image(const Tensor& img) {
    const std::size_t c_n = img.extent(0), h = img.extent(1), w = img.extent(2);
    Tensor out({c_n, h, w});
    for (std::size_t c = 0; c < c_n; ++c)
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x)
                out.at3(c, y, x) = img.at3(c, h - 1 - y, w - 1 - x);
    return out;
}

namespace {

LightField rotate_quarter(const LightField& lf) {
    if (lf.ang_u != lf.ang_v)
        throw DimensionError("quarter-turn rotation needs a square angular grid");
    LightField out;
    out.ang_u = lf.ang_v;
    out.ang_v = lf.ang_u;
    out.spat_s = lf.spat_t;
    out.spat_t = lf.spat_s;
    out.views.assign(out.ang_u * out.ang_v, Tensor());
    // Same (row,col) -> (N-1-col, row) permutation on the angular grid as on
    // each view's pixels, so packing commutes with rotation.
    for (std::size_t nv = 0; nv < out.ang_v; ++nv)
        for (std::size_t nu = 0; nu < out.ang_u; ++nu)
            out.view(nu, nv) = rotate90_image(lf.view(lf.ang_u - 1 - nv, nu));
    return out;
}

}  // namespace

LightField rotate_lf(const LightField& lf, Rotation angle) {
    if (angle == Rotation::Quarter) return rotate_quarter(lf);
    if (angle == Rotation::Half) {
        LightField out;
        out.ang_u = lf.ang_u;
        out.ang_v = lf.ang_v;
        out.spat_s = lf.spat_s;
        out.spat_t = lf.spat_t;
        out.views.assign(lf.views.size(), Tensor());
        for (std::size_t nv = 0; nv < out.ang_v; ++nv)
            for (std::size_t nu = 0; nu < out.ang_u; ++nu)
                out.view(nu, nv) =
                    rotate180_image(lf.view(lf.ang_u - 1 - nu, lf.ang_v - 1 - nv));
        return out;
    }
    return rotate_quarter(rotate_lf(lf, Rotation::Half));
}

Tensor center_view(const LightField& lf) {
    return lf.view(lf.ang_u / 2, lf.ang_v / 2);
}

namespace {

std::string meta_path_for(const std::string& png_path) {
    fs::path p(png_path);
    p.replace_extension(".meta");
    return p.string();
}

std::pair<std::size_t, std::size_t> read_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("missing sidecar file " + path);
    std::size_t u = 0, v = 0;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "ang_u")
            u = std::stoul(val);
        else if (key == "ang_v")
            v = std::stoul(val);
    }
    if (u == 0 || v == 0) throw FormatError("sidecar " + path + " lacks ang_u/ang_v");
    return {u, v};
}

}  // namespace

LightField load_lightfield(const std::string& path) {
    if (fs::is_directory(path)) {
        std::size_t max_u = 0, max_v = 0;
        for (const auto& e : fs::directory_iterator(path)) {
            if (e.path().extension() != ".png") continue;
            const std::string name = e.path().filename().string();
            std::size_t u, v;
            if (std::sscanf(name.c_str(), "view_%zu_%zu.png", &u, &v) == 2) {
                max_u = std::max(max_u, u + 1);
                max_v = std::max(max_v, v + 1);
            }
        }
        if (max_u == 0 || max_v == 0)
            throw FormatError("no view_<u>_<v>.png files in " + path);
        LightField lf;
        lf.ang_u = max_u;
        lf.ang_v = max_v;
        lf.views.assign(max_u * max_v, Tensor());
        for (std::size_t v = 0; v < max_v; ++v) {
            for (std::size_t u = 0; u < max_u; ++u) {
                const std::string f = path + "/view_" + std::to_string(u) + "_" +
                                      std::to_string(v) + ".png";
                if (!fs::exists(f)) throw FormatError("incomplete view grid: missing " + f);
                lf.view(u, v) = load_png_rgb(f);
            }
        }
        lf.spat_t = lf.views[0].extent(1);
        lf.spat_s = lf.views[0].extent(2);
        validate_lightfield(lf);
        return lf;
    }
    MicroLensImage mla;
    mla.pixels = load_png_rgb(path);
    const auto [u, v] = read_sidecar(meta_path_for(path));
    mla.ang_u = u;
    mla.ang_v = v;
    return sai_from_mla(mla, u, v);
}

void save_lightfield_mla(const std::string& png_path, const LightField& lf) {
    const MicroLensImage mla = mla_from_sai(lf);
    save_png_rgb(png_path, mla.pixels);
    std::ofstream out(meta_path_for(png_path));
    if (!out) throw FormatError("cannot write sidecar for " + png_path);
    out << "ang_u=" << lf.ang_u << "\n"
        << "ang_v=" << lf.ang_v << "\n";
}

void save_lightfield_views(const std::string& dir_path, const LightField& lf) {
    fs::create_directories(dir_path);
    for (std::size_t v = 0; v < lf.ang_v; ++v)
        for (std::size_t u = 0; u < lf.ang_u; ++u)
            save_png_rgb(dir_path + "/view_" + std::to_string(u) + "_" + std::to_string(v) +
                             ".png",
                         lf.view(u, v));
}

}  // namespace lfsal
