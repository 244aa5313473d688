#include "lfsal/pipeline.hpp"

#include "lfsal/checkpoint.hpp"

namespace lfsal {
namespace {

std::size_t default_target(Profile p) { return p == Profile::Full ? 512 : 32; }

std::uint64_t conv_macs(const ConvLayerSpec& s, std::size_t in_h, std::size_t in_w,
                        std::size_t& out_h, std::size_t& out_w) {
    out_h = conv_out_extent(in_h, s.kernel_h, s.stride_h, s.dilation_h, s.padding);
    out_w = conv_out_extent(in_w, s.kernel_w, s.stride_w, s.dilation_w, s.padding);
    return (std::uint64_t)s.out_channels * s.in_channels * s.kernel_h * s.kernel_w * out_h *
           out_w;
}

}  // namespace

PipelineModel build_pipeline(Profile profile, std::uint64_t seed, bool baseline,
                             std::size_t spatial_target) {
    PipelineModel m;
    m.profile = profile;
    m.baseline = baseline;
    m.spatial_target = spatial_target ? spatial_target : default_target(profile);
    if (m.spatial_target % 32 != 0)
        throw DimensionError("spatial target must be a multiple of 32 so the detector input "
                             "stays a multiple of 16");
    if (!baseline) m.fee = build_fee(seed);
    m.det = build_detector(profile, seed + 1);
    return m;
}

Tensor pipeline_forward(const PipelineModel& model, const LightField& lf, ShapeLog* log) {
    const std::size_t target = model.spatial_target;
    if (model.baseline) {
        Tensor view = center_view(lf);
        if (view.extent(1) != target / 2 || view.extent(2) != target / 2)
            view = upsample_bilinear(view, target / 2, target / 2);
        if (log) log->add("centre_view", view);
        return detector_forward(model.det, view, log);
    }

    if (lf.ang_u != 9 || lf.ang_v != 9)
        throw DimensionError("pipeline expects a 9x9 angular grid, got " +
                             std::to_string(lf.ang_u) + "x" + std::to_string(lf.ang_v));
    const LightField* src = &lf;
    LightField resized;
    if (lf.spat_s != target || lf.spat_t != target) {
        resized = resize_spatial(lf, target, target);
        src = &resized;
    }
    const MicroLensImage mla = mla_from_sai(*src);
    if (log) log->add("mla", mla.pixels);
    const Tensor encoded = fee_forward(model.fee, mla.pixels, log);
    return detector_forward(model.det, encoded, log);
}

ParamSet model_params(PipelineModel& model) {
    ParamSet set;
    if (!model.baseline) set = fee_params(model.fee);
    for (ParamRef& r : detector_params(model.det)) set.push_back(r);
    return set;
}

void save_model(const std::string& path, const PipelineModel& model) {
    std::map<std::string, Tensor> tensors;
    PipelineModel& mut = const_cast<PipelineModel&>(model);
    for (const ParamRef& r : model_params(mut)) {
        tensors[r.name + ".w"] = *r.weight;
        tensors[r.name + ".b"] = *r.bias;
    }
    tensors["meta.profile"] = Tensor::full({1}, model.profile == Profile::Full ? 1.0 : 0.0);
    tensors["meta.baseline"] = Tensor::full({1}, model.baseline ? 1.0 : 0.0);
    tensors["meta.spatial_target"] = Tensor::full({1}, (double)model.spatial_target);
    save_checkpoint(path, tensors);
}

PipelineModel load_model(const std::string& path) {
    std::map<std::string, Tensor> tensors = load_checkpoint(path);
    auto take_meta = [&](const std::string& name) {
        const auto it = tensors.find(name);
        if (it == tensors.end()) throw FormatError("checkpoint lacks " + name);
        const double v = it->second.data.at(0);
        tensors.erase(it);
        return v;
    };
    const Profile profile = take_meta("meta.profile") != 0.0 ? Profile::Full : Profile::Toy;
    const bool baseline = take_meta("meta.baseline") != 0.0;
    const auto target = (std::size_t)take_meta("meta.spatial_target");

    PipelineModel model = build_pipeline(profile, 0, baseline, target);
    for (const ParamRef& r : model_params(model)) {
        for (const auto& [suffix, dst] : {std::pair<const char*, Tensor*>{".w", r.weight},
                                          std::pair<const char*, Tensor*>{".b", r.bias}}) {
            const auto it = tensors.find(r.name + suffix);
            if (it == tensors.end()) throw FormatError("checkpoint lacks tensor " + r.name + suffix);
            if (it->second.shape != dst->shape)
                throw FormatError("checkpoint tensor " + r.name + suffix + " has shape " +
                                  shape_str(it->second.shape) + ", expected " +
                                  shape_str(dst->shape));
            *dst = std::move(it->second);
            tensors.erase(it);
        }
    }
    if (!tensors.empty())
        throw FormatError("checkpoint holds unknown tensor " + tensors.begin()->first);
    return model;
}

std::uint64_t analytic_macs(const PipelineModel& model) {
    std::uint64_t total = 0;
    const std::size_t det_in = model.spatial_target / 2;

    if (!model.baseline) {
        std::size_t h = model.spatial_target * 9, w = model.spatial_target * 9;
        for (const ConvLayer& l : model.fee.layers) {
            std::size_t oh, ow;
            total += conv_macs(l.spec, h, w, oh, ow);
            h = oh;
            w = ow;
        }
    }

    // Backbone: pools halve the grid after each of the first four stages.
    std::size_t h = det_in, w = det_in;
    const std::size_t stage_len[5] = {2, 2, 3, 3, 3};
    std::size_t tap_h[5], tap_w[5];
    std::size_t conv_i = 0;
    for (std::size_t stage = 0; stage < 5; ++stage) {
        for (std::size_t i = 0; i < stage_len[stage]; ++i, ++conv_i) {
            std::size_t oh, ow;
            total += conv_macs(model.det.backbone[conv_i].spec, h, w, oh, ow);
            h = oh;
            w = ow;
        }
        tap_h[stage] = h;
        tap_w[stage] = w;
        if (stage < 4) {
            h /= 2;
            w /= 2;
        }
    }

    for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t k = 0; k < 4; ++k) {
            std::size_t oh, ow;
            total += conv_macs(model.det.cpfe[t * 4 + k].spec, tap_h[2 + t], tap_w[2 + t], oh, ow);
        }

    total += (std::uint64_t)model.det.ca_fc1.weight.extent(0) * model.det.ca_fc1.weight.extent(1);
    total += (std::uint64_t)model.det.ca_fc2.weight.extent(0) * model.det.ca_fc2.weight.extent(1);

    std::size_t oh, ow;
    total += conv_macs(model.det.sa_a.spec, det_in, det_in, oh, ow);
    total += conv_macs(model.det.sa_b.spec, det_in, det_in, oh, ow);
    total += conv_macs(model.det.head_low.spec, det_in, det_in, oh, ow);
    total += conv_macs(model.det.head_high.spec, tap_h[2], tap_w[2], oh, ow);
    total += conv_macs(model.det.head_final.spec, det_in, det_in, oh, ow);
    return total;
}

}  // namespace lfsal
