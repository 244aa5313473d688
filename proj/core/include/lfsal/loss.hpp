#pragma once

#include "lfsal/tensor.hpp"

namespace lfsal {

struct LossResult {
    double loss = 0.0;
    Tensor grad;  // d loss / d P, same shape as P
};

// Class-weighted binary cross entropy, mean over all elements:
//   -mean[ alpha * Y * log P + (1 - alpha) * (1 - Y) * log(1 - P) ]
// P is clamped to [eps, 1-eps] with eps = 1e-7; Y must be exactly 0 or 1.
LossResult weighted_bce_loss(const Tensor& p, const Tensor& y, double alpha);

}  // namespace lfsal
