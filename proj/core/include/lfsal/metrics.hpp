#pragma once

#include <string>
#include <vector>

#include "lfsal/tensor.hpp"

// Saliency evaluation. Maps are real grids in [0,1] ([H,W] or [1,H,W]);
// ground truth is strictly binary. F-measure weights precision via beta^2 =
// 0.3; the weighted variant redistributes per-pixel errors by Euclidean
// distance to the foreground before forming precision/recall.

namespace lfsal {

enum class ThresholdMode { Adaptive, SweepMax };

std::string threshold_mode_name(ThresholdMode mode);

double mae(const Tensor& p, const Tensor& g);

// Adaptive threshold: tau = min(1, 2*mean); pixel salient iff value > tau.
Tensor binarize_adaptive(const Tensor& p);
Tensor binarize_fixed(const Tensor& p, double tau);

// F over an already-binary prediction. Empty conventions: both empty -> 1,
// empty prediction -> 0, empty truth with non-empty prediction -> 0.
double f_beta_binary(const Tensor& mask, const Tensor& g, double beta2 = 0.3);

// Adaptive mode thresholds once; sweep-max takes the best of the 255 uniform
// thresholds i/255, i = 0..254.
double f_beta(const Tensor& p, const Tensor& g, double beta2 = 0.3,
              ThresholdMode mode = ThresholdMode::Adaptive);

// Distance-weighted F: foreground errors are smoothed by a Gaussian
// (sigma^2 = 5) over foreground pixels, background errors decay by
// 0.5^(d/5) with d the Euclidean distance to the nearest foreground pixel.
// All-background truth returns 1 for an all-zero prediction, else 0.
double weighted_f_beta(const Tensor& p, const Tensor& g, double beta2 = 0.3);

// Exact Euclidean distance to the nearest foreground pixel, row-major;
// zero on foreground pixels.
std::vector<double> distance_to_foreground(const Tensor& mask);

struct PerImageMetrics {
    std::string id;
    double f_beta = 0.0, f_beta_w = 0.0, mae = 0.0;
};

struct MetricsReport {
    ThresholdMode mode = ThresholdMode::Adaptive;
    std::vector<PerImageMetrics> per_image;
    double f_beta = 0.0, f_beta_w = 0.0, mae = 0.0;  // unweighted means
};

MetricsReport evaluate_dataset(const std::vector<std::string>& ids,
                               const std::vector<Tensor>& preds, const std::vector<Tensor>& gts,
                               ThresholdMode mode);

// Per-image rows plus a final `aggregate` row.
void write_metrics_csv(const std::string& path, const MetricsReport& report);
// Flat key=value summary.
void write_metrics_kv(const std::string& path, const MetricsReport& report);

}  // namespace lfsal
