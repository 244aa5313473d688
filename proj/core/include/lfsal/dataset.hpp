#pragma once

#include <string>
#include <vector>

#include "lfsal/lightfield.hpp"

// On-disk dataset layout: <root>/lf/ holds the light fields (either
// `<id>.png` + `<id>.meta` micro-lens images, or `<id>/` view directories —
// never a mix), <root>/gt/ holds `<id>.png` binary masks. Entries pair by
// stem. Crop ids share a source stem before a trailing `_c<k>` suffix, and
// k-fold splitting never separates crops of one source.

namespace lfsal {

enum class LayoutKind { Mla, SaiDir };

struct DatasetEntry {
    std::string id;
    std::string lf_path;
    std::string gt_path;
};

struct DatasetIndex {
    LayoutKind layout = LayoutKind::Mla;
    std::vector<DatasetEntry> entries;  // sorted by id
};

// Pairs lf/ and gt/ by stem, decoding every file once to validate it.
// PairingError lists orphans; FormatError for mixed layouts or bad images.
DatasetIndex ingest_dataset(const std::string& root);

void write_index_csv(const std::string& path, const DatasetIndex& index);

// `sq_c2` -> `sq`; ids without the suffix are their own source.
std::string source_of(const std::string& id);

struct FoldSplit {
    std::vector<std::size_t> train, test;  // indices into DatasetIndex::entries
};

// Deterministic grouped k-fold: whole source groups are shuffled by seed and
// dealt round-robin, so group counts per fold differ by at most one.
std::vector<FoldSplit> split_kfold(const DatasetIndex& index, std::size_t k, std::uint64_t seed);

void write_folds_csv(const std::string& path, const DatasetIndex& index,
                     const std::vector<FoldSplit>& folds);

LightField load_entry_lf(const DatasetIndex& index, std::size_t i);

// Ground truth as a [1,H,W] strictly-binary mask (threshold at 0.5).
Tensor load_entry_gt(const DatasetIndex& index, std::size_t i);

}  // namespace lfsal
