#include "lfsal/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "lfsal/errors.hpp"
#include "lfsal/rng.hpp"

namespace lfsal {

BenchReport run_bench(const PipelineModel& model, std::size_t runs, std::size_t warmup,
                      int threads, std::uint64_t seed) {
    if (runs == 0) throw DimensionError("benchmark needs at least one timed run");
    set_compute_threads(threads);

    BenchReport rep;
    rep.profile = model.profile;
    rep.baseline = model.baseline;
    rep.warmup = warmup;
    rep.threads = threads;
    rep.field_s = model.spatial_target;
    rep.field_t = std::max<std::size_t>(2, (model.spatial_target * 375 + 256) / 512);
    rep.packed_w = 9 * model.spatial_target;
    rep.packed_h = 9 * model.spatial_target;

    LightField lf = LightField::create(9, 9, rep.field_s, rep.field_t);
    Rng rng(seed ^ 0xbe9c4ULL);
    for (Tensor& v : lf.views)
        for (double& x : v.data) x = rng.uniform();

    mac_counter_reset();
    Tensor out = pipeline_forward(model, lf);
    rep.macs_measured = mac_counter_read();
    rep.macs_analytic = analytic_macs(model);
    (void)out;

    for (std::size_t i = 0; i < warmup; ++i) pipeline_forward(model, lf);

    rep.run_seconds.reserve(runs);
    for (std::size_t i = 0; i < runs; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        pipeline_forward(model, lf);
        const auto t1 = std::chrono::steady_clock::now();
        rep.run_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    }

    std::vector<double> sorted = rep.run_seconds;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double s : sorted) sum += s;
    rep.mean_s = sum / static_cast<double>(sorted.size());
    const std::size_t n = sorted.size();
    rep.median_s = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    std::size_t p95 = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    rep.p95_s = sorted[std::max<std::size_t>(1, p95) - 1];
    return rep;
}

void write_bench_kv(const std::string& path, const BenchReport& report) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw FormatError("cannot write " + path);
    std::fprintf(f, "profile=%s\n", report.profile == Profile::Full ? "full" : "toy");
    std::fprintf(f, "baseline=%d\n", report.baseline ? 1 : 0);
    std::fprintf(f, "input_views=9x9\n");
    std::fprintf(f, "input_view_size=%zux%zu\n", report.field_s, report.field_t);
    std::fprintf(f, "packed_size=%zux%zu\n", report.packed_w, report.packed_h);
    std::fprintf(f, "threads=%d\n", report.threads);
    std::fprintf(f, "warmup=%zu\n", report.warmup);
    std::fprintf(f, "runs=%zu\n", report.run_seconds.size());
    std::fprintf(f, "macs_measured=%llu\n", (unsigned long long)report.macs_measured);
    std::fprintf(f, "macs_analytic=%llu\n", (unsigned long long)report.macs_analytic);
    std::fprintf(f, "macs_match=%d\n", report.macs_measured == report.macs_analytic ? 1 : 0);
    std::fprintf(f, "mean_s=%.6f\n", report.mean_s);
    std::fprintf(f, "median_s=%.6f\n", report.median_s);
    std::fprintf(f, "p95_s=%.6f\n", report.p95_s);
    for (std::size_t i = 0; i < report.run_seconds.size(); ++i)
        std::fprintf(f, "run_%zu_s=%.6f\n", i, report.run_seconds[i]);
    std::fclose(f);
}

}  // namespace lfsal
