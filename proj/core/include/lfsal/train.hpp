#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lfsal/dataset.hpp"
#include "lfsal/pipeline.hpp"

// Three-stage training schedule over one optimizer state:
//   stage 1 — detector alone on plain centre views (off by default),
//   stage 2 — encoder alone, detector frozen, on packed light fields,
//   stage 3 — encoder and detector jointly.
// Baseline models have no encoder, so every stage trains the detector on
// centre views; the stage labels (and epoch budget) stay identical, which
// keeps baseline-vs-full comparisons seed- and schedule-matched.

namespace lfsal {

struct TrainConfig {
    double lr = 1e-2;
    double momentum = 0.9;
    double weight_decay = 0.0;
    std::size_t batch_size = 8;
    std::size_t stage1_epochs = 0;
    std::size_t stage2_epochs = 10;
    std::size_t stage3_epochs = 40;
    double alpha_s = 0.528;           // positive-class weight in the loss
    std::uint64_t seed = 1;
    Profile profile = Profile::Toy;
    std::size_t spatial_target = 0;   // 0 = profile default
    // Rotation augmentation is enumerated, not sampled: each epoch walks all
    // four quarter-turns of every item, so successive epochs see identical
    // data and the epoch-mean loss curve stays smooth.
    bool augment_rotation = false;
    bool augment_photometric = false;  // random per item per epoch
    bool baseline = false;
    int threads = 1;
    std::string out_checkpoint = "model.ckpt";
    std::string out_log = "train_log.csv";
};

// key=value lines, one per option, keys named exactly like the struct
// fields; '#' starts a comment. Unknown keys are FormatErrors.
TrainConfig load_train_config(const std::string& path);

struct EpochStat {
    std::size_t epoch = 0;  // 1-based, global across stages
    int stage = 0;
    double mean_loss = 0.0;
};

struct TrainResult {
    PipelineModel model;
    std::vector<EpochStat> epochs;
};

// Deterministic for a fixed config and dataset. Writes the checkpoint and
// the epoch,stage,mean_loss CSV unless the paths are empty. A numeric fault
// aborts with a NumericError naming stage, epoch and batch.
TrainResult train(const TrainConfig& config, const DatasetIndex& data,
                  const std::function<void(const EpochStat&)>& on_epoch = {});

}  // namespace lfsal
