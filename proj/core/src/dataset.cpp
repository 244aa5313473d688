#include "lfsal/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include "lfsal/errors.hpp"
#include "lfsal/png_io.hpp"
#include "lfsal/rng.hpp"

namespace fs = std::filesystem;

namespace lfsal {

DatasetIndex ingest_dataset(const std::string& root) {
    const fs::path lf_dir = fs::path(root) / "lf";
    const fs::path gt_dir = fs::path(root) / "gt";
    if (!fs::is_directory(lf_dir) || !fs::is_directory(gt_dir))
        throw FormatError("dataset root needs lf/ and gt/ directories: " + root);

    // stem -> lf path; directories are view sets, .png files are packed images
    std::map<std::string, std::string> lf_by_id;
    bool saw_mla = false, saw_dir = false;
    for (const auto& e : fs::directory_iterator(lf_dir)) {
        const fs::path& p = e.path();
        if (e.is_directory()) {
            saw_dir = true;
            lf_by_id[p.filename().string()] = p.string();
        } else if (p.extension() == ".png") {
            saw_mla = true;
            lf_by_id[p.stem().string()] = p.string();
        }
        // sidecar .meta files ride along with their .png
    }
    if (saw_mla && saw_dir)
        throw FormatError("mixed packed-image and view-directory layouts under " + lf_dir.string());

    std::map<std::string, std::string> gt_by_id;
    for (const auto& e : fs::directory_iterator(gt_dir)) {
        const fs::path& p = e.path();
        if (e.is_regular_file() && p.extension() == ".png")
            gt_by_id[p.stem().string()] = p.string();
    }

    std::string orphans;
    for (const auto& [id, path] : lf_by_id)
        if (!gt_by_id.count(id)) orphans += " lf:" + id;
    for (const auto& [id, path] : gt_by_id)
        if (!lf_by_id.count(id)) orphans += " gt:" + id;
    if (!orphans.empty())
        throw PairingError("unpaired dataset entries:" + orphans);
    if (lf_by_id.empty())
        throw PairingError("no dataset entries under " + root);

    DatasetIndex index;
    index.layout = saw_dir ? LayoutKind::SaiDir : LayoutKind::Mla;
    for (const auto& [id, path] : lf_by_id) {
        // decode once so broken files surface at ingest, not mid-training
        LightField lf = load_lightfield(path);
        Tensor gt = load_png_gray(gt_by_id[id]);
        (void)lf;
        (void)gt;
        index.entries.push_back({id, path, gt_by_id[id]});
    }
    std::sort(index.entries.begin(), index.entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
    return index;
}

void write_index_csv(const std::string& path, const DatasetIndex& index) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw FormatError("cannot write " + path);
    std::fprintf(f, "id,layout,lf,gt\n");
    const char* kind = index.layout == LayoutKind::Mla ? "mla" : "sai-dir";
    for (const auto& e : index.entries)
        std::fprintf(f, "%s,%s,%s,%s\n", e.id.c_str(), kind, e.lf_path.c_str(), e.gt_path.c_str());
    std::fclose(f);
}

std::string source_of(const std::string& id) {
    const std::size_t pos = id.rfind("_c");
    if (pos == std::string::npos || pos + 2 >= id.size()) return id;
    for (std::size_t i = pos + 2; i < id.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) return id;
    return id.substr(0, pos);
}

std::vector<FoldSplit> split_kfold(const DatasetIndex& index, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw DimensionError("k-fold needs k >= 2");

    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < index.entries.size(); ++i)
        groups[source_of(index.entries[i].id)].push_back(i);
    if (groups.size() < k)
        throw DimensionError("k-fold needs at least k source groups, have " +
                             std::to_string(groups.size()));

    std::vector<std::string> names;
    for (const auto& [name, members] : groups) names.push_back(name);
    Rng rng(seed ^ 0x5f01d5eedULL);
    rng.shuffle(names);

    std::vector<FoldSplit> folds(k);
    for (std::size_t g = 0; g < names.size(); ++g) {
        const std::vector<std::size_t>& members = groups[names[g]];
        for (std::size_t f = 0; f < k; ++f) {
            std::vector<std::size_t>& dst = (f == g % k) ? folds[f].test : folds[f].train;
            dst.insert(dst.end(), members.begin(), members.end());
        }
    }
    for (FoldSplit& f : folds) {
        std::sort(f.train.begin(), f.train.end());
        std::sort(f.test.begin(), f.test.end());
    }
    return folds;
}

void write_folds_csv(const std::string& path, const DatasetIndex& index,
                     const std::vector<FoldSplit>& folds) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw FormatError("cannot write " + path);
    std::fprintf(f, "fold,role,id\n");
    for (std::size_t i = 0; i < folds.size(); ++i) {
        for (std::size_t e : folds[i].train)
            std::fprintf(f, "%zu,train,%s\n", i, index.entries[e].id.c_str());
        for (std::size_t e : folds[i].test)
            std::fprintf(f, "%zu,test,%s\n", i, index.entries[e].id.c_str());
    }
    std::fclose(f);
}

LightField load_entry_lf(const DatasetIndex& index, std::size_t i) {
    return load_lightfield(index.entries.at(i).lf_path);
}

Tensor load_entry_gt(const DatasetIndex& index, std::size_t i) {
    Tensor g = load_png_gray(index.entries.at(i).gt_path);
    for (double& v : g.data) v = v > 0.5 ? 1.0 : 0.0;
    return g;
}

}  // namespace lfsal
