#include "lfsal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace lfsal {
namespace {

struct Grid {
    const double* v;
    std::size_t h, w;
    std::size_t size() const { return h * w; }
};

Grid as_grid(const Tensor& t, const char* what) {
    if (t.rank() == 2) return {t.data.data(), t.extent(0), t.extent(1)};
    if (t.rank() == 3 && t.extent(0) == 1) return {t.data.data(), t.extent(1), t.extent(2)};
    throw DimensionError(std::string(what) + " must be [H,W] or [1,H,W], got " +
                         shape_str(t.shape));
}

std::pair<Grid, Grid> paired_grids(const Tensor& p, const Tensor& g) {
    const Grid gp = as_grid(p, "saliency map");
    const Grid gg = as_grid(g, "ground truth");
    if (gp.h != gg.h || gp.w != gg.w)
        throw DimensionError("map/truth extent mismatch: " + shape_str(p.shape) + " vs " +
                             shape_str(g.shape));
    for (std::size_t i = 0; i < gp.size(); ++i) {
        if (!(gp.v[i] >= 0.0 && gp.v[i] <= 1.0))
            throw NumericError("saliency value outside [0,1]");
        if (gg.v[i] != 0.0 && gg.v[i] != 1.0)
            throw NumericError("ground truth must be binary");
    }
    return {gp, gg};
}

double combine_f(double precision, double recall, double beta2) {
    const double denom = beta2 * precision + recall;
    if (denom == 0.0) return 0.0;
    return (1.0 + beta2) * precision * recall / denom;
}

// 1-D exact squared distance transform (lower envelope of parabolas).
void dt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
           std::vector<double>& z, std::size_t n) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (std::size_t q = 1; q < n; ++q) {
        double s;
        while (true) {
            const int p = v[k];
            s = ((f[q] + (double)(q * q)) - (f[p] + (double)(p * p))) / (double)(2 * q - 2 * p);
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = (int)q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[k + 1] < (double)q) ++k;
        const double dq = (double)q - (double)v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::string threshold_mode_name(ThresholdMode mode) {
    return mode == ThresholdMode::Adaptive ? "adaptive" : "sweep-max";
}

double mae(const Tensor& p, const Tensor& g) {
    const auto [gp, gg] = paired_grids(p, g);
    double acc = 0.0;
    for (std::size_t i = 0; i < gp.size(); ++i) acc += std::fabs(gp.v[i] - gg.v[i]);
    return acc / (double)gp.size();
}

Tensor binarize_adaptive(const Tensor& p) {
    const Grid gp = as_grid(p, "saliency map");
    double mean = 0.0;
    for (std::size_t i = 0; i < gp.size(); ++i) mean += gp.v[i];
    mean /= (double)gp.size();
    return binarize_fixed(p, std::min(1.0, 2.0 * mean));
}

Tensor binarize_fixed(const Tensor& p, double tau) {
    const Grid gp = as_grid(p, "saliency map");
    Tensor mask = Tensor::zeros(p.shape);
    for (std::size_t i = 0; i < gp.size(); ++i) mask.data[i] = gp.v[i] > tau ? 1.0 : 0.0;
    return mask;
}

double f_beta_binary(const Tensor& mask, const Tensor& g, double beta2) {
    const auto [gm, gg] = paired_grids(mask, g);
    std::size_t tp = 0, pred = 0, truth = 0;
    for (std::size_t i = 0; i < gm.size(); ++i) {
        const bool m = gm.v[i] != 0.0, t = gg.v[i] != 0.0;
        tp += (std::size_t)(m && t);
        pred += (std::size_t)m;
        truth += (std::size_t)t;
    }
    if (pred == 0) return truth == 0 ? 1.0 : 0.0;
    if (truth == 0) return 0.0;
    const double precision = (double)tp / (double)pred;
    const double recall = (double)tp / (double)truth;
    return combine_f(precision, recall, beta2);
}

double f_beta(const Tensor& p, const Tensor& g, double beta2, ThresholdMode mode) {
    if (mode == ThresholdMode::Adaptive) return f_beta_binary(binarize_adaptive(p), g, beta2);
    double best = 0.0;
    for (int i = 0; i < 255; ++i)
        best = std::max(best, f_beta_binary(binarize_fixed(p, i / 255.0), g, beta2));
    return best;
}

std::vector<double> distance_to_foreground(const Tensor& mask) {
    const Grid gm = as_grid(mask, "mask");
    const std::size_t h = gm.h, w = gm.w;
    const double inf = 1e18;
    std::vector<double> sq(h * w);
    for (std::size_t i = 0; i < h * w; ++i) sq[i] = gm.v[i] != 0.0 ? 0.0 : inf;

    const std::size_t n = std::max(h, w);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    for (std::size_t x = 0; x < w; ++x) {  // columns first
        for (std::size_t y = 0; y < h; ++y) f[y] = sq[y * w + x];
        dt_1d(f, d, v, z, h);
        for (std::size_t y = 0; y < h; ++y) sq[y * w + x] = d[y];
    }
    for (std::size_t y = 0; y < h; ++y) {  // then rows
        for (std::size_t x = 0; x < w; ++x) f[x] = sq[y * w + x];
        dt_1d(f, d, v, z, w);
        for (std::size_t x = 0; x < w; ++x) sq[y * w + x] = d[x];
    }
    for (double& s : sq) s = std::sqrt(s);
    return sq;
}

double weighted_f_beta(const Tensor& p, const Tensor& g, double beta2) {
    const auto [gp, gg] = paired_grids(p, g);
    const std::size_t h = gp.h, w = gp.w, n = gp.size();

    std::size_t n_fg = 0;
    for (std::size_t i = 0; i < n; ++i) n_fg += (std::size_t)(gg.v[i] != 0.0);
    if (n_fg == 0) {
        for (std::size_t i = 0; i < n; ++i)
            if (gp.v[i] != 0.0) return 0.0;
        return 1.0;
    }

    std::vector<double> err(n);
    for (std::size_t i = 0; i < n; ++i) err[i] = std::fabs(gp.v[i] - gg.v[i]);

    // Gaussian-smoothed foreground errors: separable, untruncated kernel so
    // the result equals the direct pairwise sum up to roundoff.
    constexpr double sigma2 = 5.0;
    std::vector<double> ky(h), kx(w);
    std::vector<double> num(n, 0.0), den(n, 0.0), tnum(n, 0.0), tden(n, 0.0);
    for (std::size_t y = 0; y < h; ++y) ky[y] = std::exp(-((double)(y * y)) / (2.0 * sigma2));
    for (std::size_t x = 0; x < w; ++x) kx[x] = std::exp(-((double)(x * x)) / (2.0 * sigma2));
    for (std::size_t y = 0; y < h; ++y) {  // horizontal pass over masked errors
        for (std::size_t x = 0; x < w; ++x) {
            double a = 0.0, b = 0.0;
            for (std::size_t q = 0; q < w; ++q) {
                if (gg.v[y * w + q] == 0.0) continue;
                const double k = kx[q > x ? q - x : x - q];
                a += k * err[y * w + q];
                b += k;
            }
            tnum[y * w + x] = a;
            tden[y * w + x] = b;
        }
    }
    for (std::size_t x = 0; x < w; ++x) {  // vertical pass
        for (std::size_t y = 0; y < h; ++y) {
            double a = 0.0, b = 0.0;
            for (std::size_t q = 0; q < h; ++q) {
                const double k = ky[q > y ? q - y : y - q];
                a += k * tnum[q * w + x];
                b += k * tden[q * w + x];
            }
            num[y * w + x] = a;
            den[y * w + x] = b;
        }
    }

    const std::vector<double> dist = distance_to_foreground(g);
    const double decay = std::log(0.5) / 5.0;

    double fg_err = 0.0, bg_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (gg.v[i] != 0.0) {
            fg_err += std::min(err[i], num[i] / den[i]);
        } else {
            bg_err += err[i] * std::exp(decay * dist[i]);
        }
    }

    const double tp = (double)n_fg - fg_err;
    const double fp = bg_err;
    const double precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
    const double recall = tp / (double)n_fg;
    return combine_f(precision, recall, beta2);
}

MetricsReport evaluate_dataset(const std::vector<std::string>& ids,
                               const std::vector<Tensor>& preds, const std::vector<Tensor>& gts,
                               ThresholdMode mode) {
    if (preds.size() != gts.size() || (!ids.empty() && ids.size() != preds.size()))
        throw PairingError("prediction/truth list lengths differ");
    if (preds.empty()) throw PairingError("nothing to evaluate");
    MetricsReport report;
    report.mode = mode;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        PerImageMetrics m;
        m.id = ids.empty() ? std::to_string(i) : ids[i];
        m.f_beta = f_beta(preds[i], gts[i], 0.3, mode);
        m.f_beta_w = weighted_f_beta(preds[i], gts[i], 0.3);
        m.mae = mae(preds[i], gts[i]);
        report.f_beta += m.f_beta;
        report.f_beta_w += m.f_beta_w;
        report.mae += m.mae;
        report.per_image.push_back(std::move(m));
    }
    const double count = (double)report.per_image.size();
    report.f_beta /= count;
    report.f_beta_w /= count;
    report.mae /= count;
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

}  // namespace

void write_metrics_csv(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << "id,f_beta,f_beta_w,mae\n";
    for (const PerImageMetrics& m : report.per_image)
        out << m.id << "," << fmt(m.f_beta) << "," << fmt(m.f_beta_w) << "," << fmt(m.mae)
            << "\n";
    out << "aggregate," << fmt(report.f_beta) << "," << fmt(report.f_beta_w) << ","
        << fmt(report.mae) << "\n";
}

void write_metrics_kv(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << "threshold_mode=" << threshold_mode_name(report.mode) << "\n"
        << "images=" << report.per_image.size() << "\n"
        << "f_beta=" << fmt(report.f_beta) << "\n"
        << "f_beta_w=" << fmt(report.f_beta_w) << "\n"
        << "mae=" << fmt(report.mae) << "\n";
}

}  // namespace lfsal
