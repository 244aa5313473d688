#include "lfsal/augment.hpp"

#include <algorithm>

namespace lfsal {

void validate_augment_spec(const AugmentSpec& spec) {
    const int r = spec.rotation_deg;
    if (r != 0 && r != 90 && r != 180 && r != 270)
        throw DimensionError("rotation must be one of 0/90/180/270");
    if (spec.brightness_delta < -0.2 || spec.brightness_delta > 0.2)
        throw NumericError("brightness_delta outside [-0.2,0.2]");
    if (spec.contrast_scale < 0.8 || spec.contrast_scale > 1.2 || spec.saturation_scale < 0.8 ||
        spec.saturation_scale > 1.2)
        throw NumericError("contrast/saturation scale outside [0.8,1.2]");
    std::array<bool, 3> seen{false, false, false};
    for (int c : spec.channel_perm) {
        if (c < 0 || c > 2 || seen[c]) throw DimensionError("channel_perm must permute {0,1,2}");
        seen[c] = true;
    }
}

AugmentSpec sample_augment(Rng& rng, bool enable_rotation, bool enable_photometric) {
    AugmentSpec spec;
    spec.seed = rng.state;
    if (enable_rotation) {
        const int choices[3] = {0, 90, 180};
        spec.rotation_deg = choices[rng.uniform_index(3)];
    }
    if (enable_photometric) {
        spec.brightness_delta = rng.uniform(-0.2, 0.2);
        spec.contrast_scale = rng.uniform(0.8, 1.2);
        spec.saturation_scale = rng.uniform(0.8, 1.2);
        for (std::size_t i = 2; i > 0; --i) {
            const std::size_t j = rng.uniform_index(i + 1);
            std::swap(spec.channel_perm[i], spec.channel_perm[j]);
        }
    }
    return spec;
}

LightField photometric_augment(const LightField& lf, const AugmentSpec& spec) {
    validate_augment_spec(spec);

    // Identity parameters must leave the field bit-identical, so each sub-op
    // is skipped outright at its neutral value instead of applying y = x math
    // that could perturb the last ulp.
    const bool do_perm = spec.channel_perm != std::array<int, 3>{0, 1, 2};
    const bool do_bright = spec.brightness_delta != 0.0;
    const bool do_contrast = spec.contrast_scale != 1.0;
    const bool do_sat = spec.saturation_scale != 1.0;

    LightField out = lf;
    if (!do_perm && !do_bright && !do_contrast && !do_sat) return out;

    // One global mean so every view receives the identical affine map.
    double mean = 0.0;
    if (do_contrast) {
        std::size_t count = 0;
        for (const Tensor& v : lf.views) {
            for (double x : v.data) mean += x;
            count += v.numel();
        }
        mean /= (double)count;
    }

    for (Tensor& view : out.views) {
        const std::size_t plane = lf.spat_s * lf.spat_t;
        if (do_perm) {
            Tensor src = view;
            for (std::size_t c = 0; c < 3; ++c) {
                const double* from = src.data.data() + (std::size_t)spec.channel_perm[c] * plane;
                std::copy(from, from + plane, view.data.data() + c * plane);
            }
        }
        if (!do_bright && !do_contrast && !do_sat) continue;
        for (std::size_t i = 0; i < plane; ++i) {
            double r = view.data[i];
            double g = view.data[plane + i];
            double b = view.data[2 * plane + i];
            if (do_bright) {
                r += spec.brightness_delta;
                g += spec.brightness_delta;
                b += spec.brightness_delta;
            }
            if (do_contrast) {
                r = mean + spec.contrast_scale * (r - mean);
                g = mean + spec.contrast_scale * (g - mean);
                b = mean + spec.contrast_scale * (b - mean);
            }
            if (do_sat) {
                const double gray = 0.299 * r + 0.587 * g + 0.114 * b;
                r = gray + spec.saturation_scale * (r - gray);
                g = gray + spec.saturation_scale * (g - gray);
                b = gray + spec.saturation_scale * (b - gray);
            }
            view.data[i] = std::clamp(r, 0.0, 1.0);
            view.data[plane + i] = std::clamp(g, 0.0, 1.0);
            view.data[2 * plane + i] = std::clamp(b, 0.0, 1.0);
        }
    }
    return out;
}

std::pair<LightField, Tensor> apply_augment(const LightField& lf, const Tensor& gt,
                                            const AugmentSpec& spec) {
    validate_augment_spec(spec);
    LightField field = lf;
    Tensor mask = gt;
    if (spec.rotation_deg == 90) {
        field = rotate_lf(field, Rotation::Quarter);
        mask = rotate90_image(mask);
    } else if (spec.rotation_deg == 180) {
        field = rotate_lf(field, Rotation::Half);
        mask = rotate180_image(mask);
    } else if (spec.rotation_deg == 270) {
        field = rotate_lf(field, Rotation::ThreeQuarter);
        mask = rotate90_image(rotate180_image(mask));
    }
    field = photometric_augment(field, spec);
    return {std::move(field), std::move(mask)};
}

}  // namespace lfsal
