#pragma once

#include <array>

#include "lfsal/lightfield.hpp"
#include "lfsal/rng.hpp"

// Angular-consistent augmentation: rotations permute views and pixels
// together; photometric changes apply the identical transform to every view
// so cross-view parallax structure survives (only its contrast may scale).

namespace lfsal {

struct AugmentSpec {
    int rotation_deg = 0;  // one of 0, 90, 180, 270 (ccw)
    double brightness_delta = 0.0;   // [-0.2, 0.2]
    double contrast_scale = 1.0;     // [0.8, 1.2]
    double saturation_scale = 1.0;   // [0.8, 1.2]
    std::array<int, 3> channel_perm = {0, 1, 2};
    std::uint64_t seed = 0;  // seed the spec was sampled from (bookkeeping)
};

void validate_augment_spec(const AugmentSpec& spec);

// Draws a random spec; rotation from {0,90,180} when enabled, photometric
// parameters from their documented ranges.
AugmentSpec sample_augment(Rng& rng, bool enable_rotation, bool enable_photometric);

// Photometric part only. Brightness adds, contrast scales about the field's
// global mean, saturation scales chroma about per-pixel Rec. 601 gray,
// channels permuted; result clamped to [0,1].
LightField photometric_augment(const LightField& lf, const AugmentSpec& spec);

// Full application: rotation (field AND ground truth) + photometric (field
// only). gt is a [1,H,W] mask; quarter turns require square masks.
std::pair<LightField, Tensor> apply_augment(const LightField& lf, const Tensor& gt,
                                            const AugmentSpec& spec);

}  // namespace lfsal
