#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lfsal/bench.hpp"
#include "lfsal/dataset.hpp"
#include "lfsal/metrics.hpp"
#include "lfsal/png_io.hpp"
#include "lfsal/synth.hpp"
#include "lfsal/train.hpp"

namespace {

using namespace lfsal;

Tensor fit_gt(const Tensor& gt, std::size_t h, std::size_t w) {
    if (gt.extent(1) == h && gt.extent(2) == w) return gt;
    Tensor r = upsample_bilinear(gt, h, w);
    for (double& v : r.data) v = v > 0.5 ? 1.0 : 0.0;
    return r;
}

int run(int argc, char** argv) {
    CLI::App app{"light-field saliency toolkit"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "generate a synthetic disparity dataset");
    std::string synth_out;
    std::size_t synth_count = 40;
    std::uint64_t synth_seed = 1;
    SynthConfig scfg;
    synth->add_option("--out", synth_out, "dataset root to create")->required();
    synth->add_option("--count", synth_count, "number of fields");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--ang", scfg.ang, "angular views per axis");
    synth->add_option("--spatial", scfg.spatial, "view size in pixels");
    synth->add_option("--distractors-min", scfg.distractors_min);
    synth->add_option("--distractors-max", scfg.distractors_max);
    synth->add_option("--distractor-disp-min", scfg.distractor_disp_min);
    synth->add_option("--distractor-disp-max", scfg.distractor_disp_max);
    synth->add_option("--salient-disp-min", scfg.salient_disp_min);
    synth->add_option("--salient-disp-max", scfg.salient_disp_max);

    // ---- ingest ----
    auto* ingest = app.add_subcommand("ingest", "index a dataset and validate pairing");
    std::string ingest_root, ingest_out;
    ingest->add_option("--root", ingest_root, "dataset root with lf/ and gt/")->required();
    ingest->add_option("--out", ingest_out, "write the index as CSV");

    // ---- split ----
    auto* split = app.add_subcommand("split", "deterministic grouped k-fold split");
    std::string split_root, split_out;
    std::size_t split_k = 5;
    std::uint64_t split_seed = 1;
    split->add_option("--root", split_root, "dataset root")->required();
    split->add_option("--k", split_k, "fold count");
    split->add_option("--seed", split_seed, "shuffle seed");
    split->add_option("--out", split_out, "write fold assignments as CSV");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "run the staged training schedule");
    std::string train_data, train_config;
    TrainConfig tc;
    double t_lr = 0, t_mom = 0, t_wd = 0, t_alpha = 0;
    std::size_t t_bs = 0, t_s1 = 0, t_s2 = 0, t_s3 = 0, t_target = 0;
    std::uint64_t t_seed = 0;
    int t_threads = 0;
    std::string t_profile, t_ckpt, t_log;
    bool t_aug_rot = false, t_aug_photo = false, t_baseline = false;
    train_cmd->add_option("--data", train_data, "dataset root")->required();
    train_cmd->add_option("--config", train_config, "key=value config file");
    train_cmd->add_option("--lr", t_lr, "learning rate");
    train_cmd->add_option("--momentum", t_mom);
    train_cmd->add_option("--weight-decay", t_wd);
    train_cmd->add_option("--batch-size", t_bs);
    train_cmd->add_option("--stage1-epochs", t_s1);
    train_cmd->add_option("--stage2-epochs", t_s2);
    train_cmd->add_option("--stage3-epochs", t_s3);
    train_cmd->add_option("--alpha-s", t_alpha, "positive-class loss weight");
    train_cmd->add_option("--seed", t_seed);
    train_cmd->add_option("--spatial-target", t_target, "working view size (multiple of 32)");
    train_cmd->add_option("--threads", t_threads);
    train_cmd->add_option("--profile", t_profile)->check(CLI::IsMember({"toy", "full"}));
    train_cmd->add_flag("--augment-rotation", t_aug_rot);
    train_cmd->add_flag("--augment-photometric", t_aug_photo);
    train_cmd->add_flag("--baseline", t_baseline, "train the detector alone on centre views");
    train_cmd->add_option("--checkpoint", t_ckpt, "output checkpoint path");
    train_cmd->add_option("--log", t_log, "output loss CSV path");

    // ---- predict ----
    auto* predict = app.add_subcommand("predict", "saliency map for one light field");
    std::string pred_ckpt, pred_lf, pred_out;
    predict->add_option("--checkpoint", pred_ckpt)->required();
    predict->add_option("--lf", pred_lf, "packed image or view directory")->required();
    predict->add_option("--out", pred_out, "output 8-bit PNG")->required();

    // ---- evaluate ----
    auto* eval = app.add_subcommand("evaluate", "score a checkpoint over a dataset");
    std::string ev_ckpt, ev_data, ev_mode = "adaptive", ev_csv, ev_kv, ev_pred_dir;
    eval->add_option("--checkpoint", ev_ckpt)->required();
    eval->add_option("--data", ev_data, "dataset root")->required();
    eval->add_option("--mode", ev_mode)->check(CLI::IsMember({"adaptive", "sweep-max"}));
    eval->add_option("--out-csv", ev_csv, "per-image metrics CSV");
    eval->add_option("--out-kv", ev_kv, "key=value summary");
    eval->add_option("--pred-dir", ev_pred_dir, "also save predicted maps here");

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "time full-pipeline inference");
    std::string bn_ckpt, bn_profile = "full", bn_out;
    std::size_t bn_runs = 5, bn_warmup = 1;
    int bn_threads = 1;
    std::uint64_t bn_seed = 1;
    bool bn_baseline = false;
    bench->add_option("--checkpoint", bn_ckpt, "model to time (else random weights)");
    bench->add_option("--profile", bn_profile)->check(CLI::IsMember({"toy", "full"}));
    bench->add_flag("--baseline", bn_baseline);
    bench->add_option("--runs", bn_runs);
    bench->add_option("--warmup", bn_warmup);
    bench->add_option("--threads", bn_threads);
    bench->add_option("--seed", bn_seed);
    bench->add_option("--out", bn_out, "write the key=value report here");

    CLI11_PARSE(app, argc, argv);

    if (*synth) {
        synth_dataset(synth_out, synth_count, synth_seed, scfg);
        std::printf("wrote %zu fields under %s\n", synth_count, synth_out.c_str());
        return 0;
    }

    if (*ingest) {
        const DatasetIndex index = ingest_dataset(ingest_root);
        if (!ingest_out.empty()) write_index_csv(ingest_out, index);
        std::printf("entries=%zu layout=%s\n", index.entries.size(),
                    index.layout == LayoutKind::Mla ? "mla" : "sai-dir");
        return 0;
    }

    if (*split) {
        const DatasetIndex index = ingest_dataset(split_root);
        const auto folds = split_kfold(index, split_k, split_seed);
        if (!split_out.empty()) write_folds_csv(split_out, index, folds);
        for (std::size_t i = 0; i < folds.size(); ++i)
            std::printf("fold=%zu train=%zu test=%zu\n", i, folds[i].train.size(),
                        folds[i].test.size());
        return 0;
    }

    if (*train_cmd) {
        TrainConfig cfg = train_config.empty() ? TrainConfig{} : load_train_config(train_config);
        if (train_cmd->count("--lr")) cfg.lr = t_lr;
        if (train_cmd->count("--momentum")) cfg.momentum = t_mom;
        if (train_cmd->count("--weight-decay")) cfg.weight_decay = t_wd;
        if (train_cmd->count("--batch-size")) cfg.batch_size = t_bs;
        if (train_cmd->count("--stage1-epochs")) cfg.stage1_epochs = t_s1;
        if (train_cmd->count("--stage2-epochs")) cfg.stage2_epochs = t_s2;
        if (train_cmd->count("--stage3-epochs")) cfg.stage3_epochs = t_s3;
        if (train_cmd->count("--alpha-s")) cfg.alpha_s = t_alpha;
        if (train_cmd->count("--seed")) cfg.seed = t_seed;
        if (train_cmd->count("--spatial-target")) cfg.spatial_target = t_target;
        if (train_cmd->count("--threads")) cfg.threads = t_threads;
        if (train_cmd->count("--profile"))
            cfg.profile = t_profile == "full" ? Profile::Full : Profile::Toy;
        if (train_cmd->count("--augment-rotation")) cfg.augment_rotation = true;
        if (train_cmd->count("--augment-photometric")) cfg.augment_photometric = true;
        if (train_cmd->count("--baseline")) cfg.baseline = true;
        if (train_cmd->count("--checkpoint")) cfg.out_checkpoint = t_ckpt;
        if (train_cmd->count("--log")) cfg.out_log = t_log;

        const DatasetIndex index = ingest_dataset(train_data);
        train(cfg, index, [](const EpochStat& s) {
            std::printf("epoch=%zu stage=%d mean_loss=%.6f\n", s.epoch, s.stage, s.mean_loss);
            std::fflush(stdout);
        });
        std::printf("checkpoint=%s log=%s\n", cfg.out_checkpoint.c_str(), cfg.out_log.c_str());
        return 0;
    }

    if (*predict) {
        const PipelineModel model = load_model(pred_ckpt);
        const LightField lf = load_lightfield(pred_lf);
        const Tensor p = pipeline_forward(model, lf);
        save_png_gray(pred_out, p);
        std::printf("wrote %s (%zux%zu)\n", pred_out.c_str(), p.extent(2), p.extent(1));
        return 0;
    }

    if (*eval) {
        const PipelineModel model = load_model(ev_ckpt);
        const DatasetIndex index = ingest_dataset(ev_data);
        const ThresholdMode mode =
            ev_mode == "sweep-max" ? ThresholdMode::SweepMax : ThresholdMode::Adaptive;
        std::vector<std::string> ids;
        std::vector<Tensor> preds, gts;
        for (std::size_t i = 0; i < index.entries.size(); ++i) {
            const LightField lf = load_entry_lf(index, i);
            Tensor p = pipeline_forward(model, lf);
            if (!ev_pred_dir.empty()) {
                std::filesystem::create_directories(ev_pred_dir);
                save_png_gray((std::filesystem::path(ev_pred_dir) /
                               (index.entries[i].id + ".png")).string(), p);
            }
            gts.push_back(fit_gt(load_entry_gt(index, i), p.extent(1), p.extent(2)));
            preds.push_back(std::move(p));
            ids.push_back(index.entries[i].id);
        }
        const MetricsReport rep = evaluate_dataset(ids, preds, gts, mode);
        if (!ev_csv.empty()) write_metrics_csv(ev_csv, rep);
        if (!ev_kv.empty()) write_metrics_kv(ev_kv, rep);
        std::printf("mode=%s images=%zu f_beta=%.6f f_beta_w=%.6f mae=%.6f\n",
                    threshold_mode_name(mode).c_str(), rep.per_image.size(), rep.f_beta,
                    rep.f_beta_w, rep.mae);
        return 0;
    }

    if (*bench) {
        PipelineModel model =
            !bn_ckpt.empty()
                ? load_model(bn_ckpt)
                : build_pipeline(bn_profile == "full" ? Profile::Full : Profile::Toy, bn_seed,
                                 bn_baseline);
        const BenchReport rep = run_bench(model, bn_runs, bn_warmup, bn_threads, bn_seed);
        if (!bn_out.empty()) write_bench_kv(bn_out, rep);
        std::printf("profile=%s runs=%zu mean_s=%.4f median_s=%.4f p95_s=%.4f\n",
                    rep.profile == Profile::Full ? "full" : "toy", rep.run_seconds.size(),
                    rep.mean_s, rep.median_s, rep.p95_s);
        std::printf("macs_measured=%llu macs_analytic=%llu match=%s\n",
                    (unsigned long long)rep.macs_measured, (unsigned long long)rep.macs_analytic,
                    rep.macs_measured == rep.macs_analytic ? "yes" : "NO");
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const lfsal::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
