#pragma once

#include <string>
#include <vector>

#include "lfsal/tensor.hpp"

// 4-D light fields as grids of RGB sub-aperture views, and the interleaved
// micro-lens layout used as network input. Sample values live in [0,1].
//
// Index convention, used everywhere: the micro-lens pixel at
// (x, y) = (s*U + u, t*V + v) equals the light-field sample (u, v, s, t).
// Each U x V block therefore collects one spatial pixel across all views.

namespace lfsal {

struct LightField {
    std::size_t ang_u = 0, ang_v = 0;   // angular resolution (U, V)
    std::size_t spat_s = 0, spat_t = 0; // per-view width S, height T
    std::vector<Tensor> views;          // row-major over (v, u), each [3, T, S]

    static LightField create(std::size_t u, std::size_t v, std::size_t s, std::size_t t);

    Tensor& view(std::size_t u, std::size_t v) { return views[v * ang_u + u]; }
    const Tensor& view(std::size_t u, std::size_t v) const { return views[v * ang_u + u]; }
};

struct MicroLensImage {
    Tensor pixels;  // [3, T*V, S*U]
    std::size_t ang_u = 0, ang_v = 0;

    std::size_t width() const { return pixels.extent(2); }
    std::size_t height() const { return pixels.extent(1); }
};

// Throws DimensionError / NumericError when the structural or range
// invariants are broken.
void validate_lightfield(const LightField& lf);

MicroLensImage mla_from_sai(const LightField& lf);
LightField sai_from_mla(const MicroLensImage& mla, std::size_t u, std::size_t v);

// Four width-4608 crops at x-offsets {0,k,2k,3k}, k = floor((W-4608)/3)
// rounded down to a multiple of U so angular blocks stay aligned.
std::vector<MicroLensImage> crop_mla_four(const MicroLensImage& mla);

// Per-view bilinear resample to S2 x T2; angular layout untouched.
LightField resize_spatial(const LightField& lf, std::size_t s2, std::size_t t2);

enum class Rotation { Quarter, Half, ThreeQuarter };  // 90 / 180 / 270 degrees, ccw

// Rotates every view AND applies the same rotation to the angular grid, so
// parallax geometry stays consistent. Quarter turns need U == V.
LightField rotate_lf(const LightField& lf, Rotation angle);

Tensor center_view(const LightField& lf);  // view (U/2, V/2)

// Single-image helpers shared with augmentation ([C,H,W], ccw quarter turn).
Tensor rotate90_image(const Tensor& img);
Tensor rotate180_image(const Tensor& img);

// Disk formats: either one RGB PNG micro-lens image `<stem>.png` with a
// sidecar `<stem>.meta` holding lines `ang_u=U` / `ang_v=V`, or a directory
// of U*V PNGs named `view_<u>_<v>.png`.
LightField load_lightfield(const std::string& path);
void save_lightfield_mla(const std::string& png_path, const LightField& lf);
void save_lightfield_views(const std::string& dir_path, const LightField& lf);

}  // namespace lfsal
