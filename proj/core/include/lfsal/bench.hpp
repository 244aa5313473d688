#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfsal/pipeline.hpp"

// Wall-clock timing of the complete inference path (view resize, micro-lens
// packing, encode, detect) on a camera-shaped field, plus a cross-check of
// the instrumented multiply-accumulate counter against the closed-form count.

namespace lfsal {

struct BenchReport {
    Profile profile = Profile::Toy;
    bool baseline = false;
    std::size_t field_s = 0, field_t = 0;    // generated input view size
    std::size_t packed_w = 0, packed_h = 0;  // micro-lens image size after resize
    std::size_t warmup = 0;
    int threads = 1;
    std::vector<double> run_seconds;         // one entry per timed run
    double mean_s = 0.0, median_s = 0.0, p95_s = 0.0;
    std::uint64_t macs_measured = 0;
    std::uint64_t macs_analytic = 0;
};

// Input: a seeded random 9x9 field at the camera aspect (width = working
// size, height = width*375/512 rounded), so the timed path includes the
// resize. One untimed instrumented pass fills the MAC fields, then `warmup`
// discarded runs, then `runs` timed ones.
BenchReport run_bench(const PipelineModel& model, std::size_t runs, std::size_t warmup,
                      int threads, std::uint64_t seed);

// key=value report; run_<i>_s lines carry the raw samples.
void write_bench_kv(const std::string& path, const BenchReport& report);

}  // namespace lfsal
