#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "lfsal/lightfield.hpp"

// Synthetic light fields where depth, not appearance, marks the target: every
// surface (background, distractor squares, one salient square) draws from the
// same texture family, and only per-view parallax separates them. The salient
// square carries a much larger disparity than the distractors, so a model must
// use the angular structure to find it — a plain centre-view detector sees
// statistically identical squares.

namespace lfsal {

struct SynthConfig {
    std::size_t ang = 9;              // angular extent per axis
    std::size_t spatial = 32;         // square view size in pixels
    std::size_t distractors_min = 2;
    std::size_t distractors_max = 3;
    double distractor_disp_min = 0.0;  // px shift per angular step
    double distractor_disp_max = 0.02;
    double salient_disp_min = 0.6;
    double salient_disp_max = 0.9;
};

// One field plus its half-resolution binary mask of the salient square.
std::pair<LightField, Tensor> synth_field(const SynthConfig& cfg, std::uint64_t seed);

// Writes count fields as <root>/lf/f<idx>.png(+.meta) and <root>/gt/f<idx>.png.
void synth_dataset(const std::string& root, std::size_t count, std::uint64_t seed,
                   const SynthConfig& cfg);

}  // namespace lfsal
