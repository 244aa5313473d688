#include "lfsal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "lfsal/errors.hpp"
#include "lfsal/png_io.hpp"
#include "lfsal/rng.hpp"

namespace fs = std::filesystem;

namespace lfsal {
namespace {

constexpr double kTau = 6.283185307179586;

// band-limited plaid so squares have visible texture at any disparity shift
struct Texture {
    double base[3];
    double amp;
    double fx, fy, px, py;

    double sample(int c, double x, double y) const {
        const double w = std::sin(kTau * (fx * x + px)) * std::sin(kTau * (fy * y + py));
        return std::clamp(base[c] + amp * w, 0.0, 1.0);
    }
};

Texture random_texture(Rng& rng) {
    Texture t;
    for (int c = 0; c < 3; ++c) t.base[c] = rng.uniform(0.3, 0.7);
    // Narrow frequency band keeps the angular footprint of a shift monotone
    // in the shift itself: fast squares decorrelate fully across the grid,
    // slow ones stay in the small-phase regime, with no frequency confound.
    t.amp = rng.uniform(0.18, 0.25);
    t.fx = rng.uniform(0.14, 0.2);
    t.fy = rng.uniform(0.14, 0.2);
    t.px = rng.uniform(0.0, 1.0);
    t.py = rng.uniform(0.0, 1.0);
    return t;
}

struct Square {
    double cx, cy;      // centre in the reference (centre) view
    double side;
    double disparity;   // px shift per angular step away from centre
    Texture tex;
};

// overlap of pixel cell [i,i+1) with interval [a,b)
double cell_overlap(double a, double b, double i) {
    return std::clamp(std::min(b, i + 1.0) - std::max(a, i), 0.0, 1.0);
}

void paint_square(Tensor& view, const Square& sq, double du, double dv) {
    const std::size_t h = view.extent(1), w = view.extent(2);
    const double sx = sq.cx + sq.disparity * du;
    const double sy = sq.cy + sq.disparity * dv;
    const double x0 = sx - sq.side / 2, x1 = sx + sq.side / 2;
    const double y0 = sy - sq.side / 2, y1 = sy + sq.side / 2;
    const long ylo = std::max(0L, static_cast<long>(std::floor(y0)));
    const long yhi = std::min(static_cast<long>(h) - 1, static_cast<long>(std::ceil(y1)));
    const long xlo = std::max(0L, static_cast<long>(std::floor(x0)));
    const long xhi = std::min(static_cast<long>(w) - 1, static_cast<long>(std::ceil(x1)));
    for (long y = ylo; y <= yhi; ++y) {
        const double covy = cell_overlap(y0, y1, static_cast<double>(y));
        if (covy <= 0.0) continue;
        for (long x = xlo; x <= xhi; ++x) {
            const double cov = covy * cell_overlap(x0, x1, static_cast<double>(x));
            if (cov <= 0.0) continue;
            // texture coordinates ride with the square so it looks rigid
            const double tx = x - sx, ty = y - sy;
            for (int c = 0; c < 3; ++c) {
                double& px = view.at3(static_cast<std::size_t>(c), static_cast<std::size_t>(y),
                                      static_cast<std::size_t>(x));
                px = cov * sq.tex.sample(c, tx, ty) + (1.0 - cov) * px;
            }
        }
    }
}

}  // namespace

std::pair<LightField, Tensor> synth_field(const SynthConfig& cfg, std::uint64_t seed) {
    if (cfg.ang < 1 || cfg.spatial < 16)
        throw DimensionError("synthetic field needs ang >= 1 and spatial >= 16");
    if (cfg.spatial % 2 != 0)
        throw DimensionError("synthetic field needs an even view size");
    Rng rng(seed ^ 0x51e1dULL);

    const double n = static_cast<double>(cfg.spatial);
    const Texture bg = random_texture(rng);

    std::vector<Square> squares;
    const std::size_t extra =
        cfg.distractors_min +
        rng.uniform_index(cfg.distractors_max - cfg.distractors_min + 1);
    for (std::size_t i = 0; i < extra; ++i) {
        Square s;
        s.side = rng.uniform(0.3 * n, 0.5 * n);
        s.cx = rng.uniform(0.2 * n, 0.8 * n);
        s.cy = rng.uniform(0.2 * n, 0.8 * n);
        s.disparity = rng.uniform(cfg.distractor_disp_min, cfg.distractor_disp_max);
        s.tex = random_texture(rng);
        squares.push_back(s);
    }
    Square sal;
    sal.side = rng.uniform(0.3 * n, 0.5 * n);
    sal.cx = rng.uniform(0.25 * n, 0.75 * n);
    sal.cy = rng.uniform(0.25 * n, 0.75 * n);
    sal.disparity = rng.uniform(cfg.salient_disp_min, cfg.salient_disp_max);
    sal.tex = random_texture(rng);
    squares.push_back(sal);

    // nearer (larger-disparity) surfaces paint last and therefore occlude
    std::stable_sort(squares.begin(), squares.end(),
                     [](const Square& a, const Square& b) { return a.disparity < b.disparity; });

    LightField lf = LightField::create(cfg.ang, cfg.ang, cfg.spatial, cfg.spatial);
    const double mid = (static_cast<double>(cfg.ang) - 1.0) / 2.0;
    for (std::size_t v = 0; v < cfg.ang; ++v) {
        for (std::size_t u = 0; u < cfg.ang; ++u) {
            Tensor& view = lf.view(u, v);
            const double du = static_cast<double>(u) - mid;
            const double dv = static_cast<double>(v) - mid;
            for (std::size_t y = 0; y < cfg.spatial; ++y)
                for (std::size_t x = 0; x < cfg.spatial; ++x)
                    for (int c = 0; c < 3; ++c)
                        view.at3(static_cast<std::size_t>(c), y, x) =
                            bg.sample(c, static_cast<double>(x), static_cast<double>(y));
            for (const Square& s : squares) paint_square(view, s, du, dv);
        }
    }

    // mask of the salient square in the centre view, at half resolution
    const std::size_t gh = cfg.spatial / 2;
    Tensor gt = Tensor::zeros({1, gh, gh});
    const double x0 = sal.cx - sal.side / 2, x1 = sal.cx + sal.side / 2;
    const double y0 = sal.cy - sal.side / 2, y1 = sal.cy + sal.side / 2;
    for (std::size_t y = 0; y < gh; ++y) {
        for (std::size_t x = 0; x < gh; ++x) {
            const double cy = cell_overlap(y0 / 2.0, y1 / 2.0, static_cast<double>(y));
            const double cx = cell_overlap(x0 / 2.0, x1 / 2.0, static_cast<double>(x));
            gt.at3(0, y, x) = (cy * cx) >= 0.5 ? 1.0 : 0.0;
        }
    }
    return {std::move(lf), std::move(gt)};
}

void synth_dataset(const std::string& root, std::size_t count, std::uint64_t seed,
                   const SynthConfig& cfg) {
    const fs::path lf_dir = fs::path(root) / "lf";
    const fs::path gt_dir = fs::path(root) / "gt";
    fs::create_directories(lf_dir);
    fs::create_directories(gt_dir);
    for (std::size_t i = 0; i < count; ++i) {
        auto [lf, gt] = synth_field(cfg, seed + i * 0x9e3779b97f4a7c15ULL);
        const std::string name = "f" + std::to_string(i);
        save_lightfield_mla((lf_dir / (name + ".png")).string(), lf);
        save_png_gray((gt_dir / (name + ".png")).string(), gt);
    }
}

}  // namespace lfsal
