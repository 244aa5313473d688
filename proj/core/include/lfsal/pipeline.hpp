#pragma once

#include "lfsal/detector.hpp"
#include "lfsal/fee.hpp"
#include "lfsal/lightfield.hpp"

// Whole-model plumbing: encoder + detector bundled with the spatial working
// size, end-to-end inference from a light field, checkpoint round-tripping,
// and the closed-form multiply-accumulate count the benchmark checks against.

namespace lfsal {

struct PipelineModel {
    Profile profile = Profile::Toy;
    bool baseline = false;           // detector alone, fed the centre view
    std::size_t spatial_target = 0;  // square per-view size fed to the encoder
    FeeParams fee;
    DetectorParams det;
};

// spatial_target 0 picks the profile default (toy 32, full 512).
PipelineModel build_pipeline(Profile profile, std::uint64_t seed, bool baseline = false,
                             std::size_t spatial_target = 0);

// Views resized to the working size, packed to the micro-lens layout,
// encoded, detected. Baseline models skip encode and feed the resized centre
// view straight to the detector. Output [1, spatial_target/2, spatial_target/2].
Tensor pipeline_forward(const PipelineModel& model, const LightField& lf,
                        ShapeLog* log = nullptr);

// Optimizer/checkpoint view of all trainable tensors (encoder omitted for
// baseline models).
ParamSet model_params(PipelineModel& model);

void save_model(const std::string& path, const PipelineModel& model);
PipelineModel load_model(const std::string& path);

// Closed-form count of multiply-accumulates in one pipeline_forward, from the
// layer shapes alone: sum over conv layers of Cout*Cin*kh*kw*H'*W' plus the
// dense gate products. The instrumented runtime counter must match exactly.
std::uint64_t analytic_macs(const PipelineModel& model);

}  // namespace lfsal
