#include "lfsal/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lfsal/augment.hpp"
#include "lfsal/errors.hpp"
#include "lfsal/loss.hpp"

namespace lfsal {
namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw FormatError("config key " + key + " wants 0/1 or true/false, got '" + v + "'");
}

Tensor fit_mask(const Tensor& gt, std::size_t h, std::size_t w) {
    if (gt.extent(1) == h && gt.extent(2) == w) return gt;
    Tensor r = upsample_bilinear(gt, h, w);
    for (double& v : r.data) v = v > 0.5 ? 1.0 : 0.0;
    return r;
}

Tensor fit_view(Tensor view, std::size_t h, std::size_t w) {
    if (view.extent(1) == h && view.extent(2) == w) return view;
    return upsample_bilinear(view, h, w);
}

struct ItemStore {
    const DatasetIndex& index;
    bool preloaded = false;
    std::vector<LightField> fields;
    std::vector<Tensor> masks;

    explicit ItemStore(const DatasetIndex& idx) : index(idx) {
        // small sets stay resident; big ones stream from disk each epoch
        if (idx.entries.size() <= 512) {
            preloaded = true;
            for (std::size_t i = 0; i < idx.entries.size(); ++i) {
                fields.push_back(load_entry_lf(idx, i));
                masks.push_back(load_entry_gt(idx, i));
            }
        }
    }

    std::pair<LightField, Tensor> get(std::size_t i) const {
        if (preloaded) return {fields[i], masks[i]};
        return {load_entry_lf(index, i), load_entry_gt(index, i)};
    }
};

int stage_of(std::size_t epoch, const TrainConfig& c) {
    if (epoch <= c.stage1_epochs) return 1;
    if (epoch <= c.stage1_epochs + c.stage2_epochs) return 2;
    return 3;
}

}  // namespace

TrainConfig load_train_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read config " + path);
    TrainConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("config line " + std::to_string(lineno) + " is not key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "lr") c.lr = std::stod(val);
            else if (key == "momentum") c.momentum = std::stod(val);
            else if (key == "weight_decay") c.weight_decay = std::stod(val);
            else if (key == "batch_size") c.batch_size = std::stoul(val);
            else if (key == "stage1_epochs") c.stage1_epochs = std::stoul(val);
            else if (key == "stage2_epochs") c.stage2_epochs = std::stoul(val);
            else if (key == "stage3_epochs") c.stage3_epochs = std::stoul(val);
            else if (key == "alpha_s") c.alpha_s = std::stod(val);
            else if (key == "seed") c.seed = std::stoull(val);
            else if (key == "spatial_target") c.spatial_target = std::stoul(val);
            else if (key == "threads") c.threads = std::stoi(val);
            else if (key == "augment_rotation") c.augment_rotation = parse_bool(val, key);
            else if (key == "augment_photometric") c.augment_photometric = parse_bool(val, key);
            else if (key == "baseline") c.baseline = parse_bool(val, key);
            else if (key == "out_checkpoint") c.out_checkpoint = val;
            else if (key == "out_log") c.out_log = val;
            else if (key == "profile") {
                if (val == "toy") c.profile = Profile::Toy;
                else if (val == "full") c.profile = Profile::Full;
                else throw FormatError("profile must be toy or full, got '" + val + "'");
            } else {
                throw FormatError("unknown config key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw FormatError("config key " + key + " has a malformed value '" + val + "'");
        } catch (const std::out_of_range&) {
            throw FormatError("config key " + key + " has an out-of-range value '" + val + "'");
        }
    }
    return c;
}

TrainResult train(const TrainConfig& config, const DatasetIndex& data,
                  const std::function<void(const EpochStat&)>& on_epoch) {
    if (data.entries.empty()) throw PairingError("training needs a non-empty dataset");
    if (config.batch_size == 0) throw DimensionError("batch_size must be positive");
    if (config.alpha_s <= 0.0 || config.alpha_s >= 1.0)
        throw NumericError("alpha_s must lie strictly inside (0,1)");
    set_compute_threads(config.threads);

    TrainResult result;
    result.model = build_pipeline(config.profile, config.seed, config.baseline,
                                  config.spatial_target);
    PipelineModel& model = result.model;
    const std::size_t target = model.spatial_target;
    const std::size_t half = target / 2;

    const ItemStore items(data);
    ParamSet fee_set = model.baseline ? ParamSet{} : fee_params(model.fee);
    ParamSet det_set = detector_params(model.det);
    ParamSet all_set = model_params(model);

    SgdState sgd;
    const std::size_t total_epochs =
        config.stage1_epochs + config.stage2_epochs + config.stage3_epochs;

    // With rotation augmentation each epoch enumerates all four quarter-turns
    // of every item; virtual index v maps to item v/reps and turn v%reps.
    const std::size_t reps = config.augment_rotation ? 4 : 1;
    std::vector<std::size_t> order(data.entries.size() * reps);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // One seed-derived permutation reused by every epoch: batches stay
    // randomized but identical across epochs, so the epoch-mean loss tracks
    // the optimizer rather than the shuffle.
    Rng shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    shuffle_rng.shuffle(order);

    for (std::size_t epoch = 1; epoch <= total_epochs; ++epoch) {
        const int stage = stage_of(epoch, config);
        const bool centre_stage = model.baseline || stage == 1;
        Rng aug_rng(config.seed ^ (epoch * 0xa46e17ULL + 0x9e3779b97f4a7c15ULL));

        double epoch_loss = 0.0;
        std::size_t batch_no = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            ++batch_no;
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            GradSet grads;
            try {
                for (std::size_t pos = start; pos < stop; ++pos) {
                    auto [lf, gt] = items.get(order[pos] / reps);
                    if (config.augment_rotation || config.augment_photometric) {
                        AugmentSpec spec = sample_augment(
                            aug_rng, false, config.augment_photometric);
                        spec.rotation_deg = static_cast<int>(order[pos] % reps) * 90;
                        std::tie(lf, gt) = apply_augment(lf, gt, spec);
                    }
                    gt = fit_mask(gt, half, half);

                    Tensor pred;
                    DetectorCache det_cache;
                    FeeCache fee_cache;
                    if (centre_stage) {
                        const Tensor view = fit_view(center_view(lf), half, half);
                        pred = detector_forward_cached(model.det, view, det_cache);
                    } else {
                        if (lf.spat_s != target || lf.spat_t != target)
                            lf = resize_spatial(lf, target, target);
                        const MicroLensImage mla = mla_from_sai(lf);
                        const Tensor enc = fee_forward_cached(model.fee, mla.pixels, fee_cache);
                        pred = detector_forward_cached(model.det, enc, det_cache);
                    }

                    LossResult bce = weighted_bce_loss(pred, gt, config.alpha_s);
                    epoch_loss += bce.loss;
                    for (double& g : bce.grad.data) g *= inv_batch;
                    const Tensor g_enc =
                        detector_backward(model.det, det_cache, bce.grad, grads);
                    if (!centre_stage) fee_backward(model.fee, fee_cache, g_enc, grads);
                }

                ParamSet& active = centre_stage ? det_set
                                 : stage == 2   ? fee_set
                                                : all_set;
                if (config.weight_decay != 0.0) {
                    for (const ParamRef& r : active) {
                        auto it = grads.by_name.find(r.name);
                        if (it == grads.by_name.end()) continue;
                        for (std::size_t i = 0; i < r.weight->data.size(); ++i)
                            it->second.weight.data[i] += config.weight_decay * r.weight->data[i];
                        for (std::size_t i = 0; i < r.bias->data.size(); ++i)
                            it->second.bias.data[i] += config.weight_decay * r.bias->data[i];
                    }
                }
                sgd_momentum_step(active, grads, sgd, config.lr, config.momentum);
            } catch (const NumericError& e) {
                throw NumericError("stage " + std::to_string(stage) + " epoch " +
                                   std::to_string(epoch) + " batch " + std::to_string(batch_no) +
                                   ": " + e.what());
            }
        }

        EpochStat stat{epoch, stage, epoch_loss / static_cast<double>(order.size())};
        result.epochs.push_back(stat);
        if (on_epoch) on_epoch(stat);
    }

    if (!config.out_log.empty()) {
        std::FILE* f = std::fopen(config.out_log.c_str(), "w");
        if (!f) throw FormatError("cannot write " + config.out_log);
        std::fprintf(f, "epoch,stage,mean_loss\n");
        for (const EpochStat& s : result.epochs)
            std::fprintf(f, "%zu,%d,%.9f\n", s.epoch, s.stage, s.mean_loss);
        std::fclose(f);
    }
    if (!config.out_checkpoint.empty()) save_model(config.out_checkpoint, model);
    return result;
}

}  // namespace lfsal
