#include "lfsal/loss.hpp"

#include <cmath>

namespace lfsal {

LossResult weighted_bce_loss(const Tensor& p, const Tensor& y, double alpha) {
    ensure_same_shape(p, y, "weighted_bce_loss");
    constexpr double eps = 1e-7;
    const double n = (double)p.numel();
    LossResult res;
    res.grad = Tensor::zeros(p.shape);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.numel(); ++i) {
        const double yi = y.data[i];
        if (yi != 0.0 && yi != 1.0)
            throw NumericError("ground truth must be binary in weighted_bce_loss");
        const double raw = p.data[i];
        const double pi = std::min(1.0 - eps, std::max(eps, raw));
        acc += alpha * yi * std::log(pi) + (1.0 - alpha) * (1.0 - yi) * std::log(1.0 - pi);
        // Clamped elements sit on a flat spot of the surrogate: zero gradient.
        if (raw > eps && raw < 1.0 - eps)
            res.grad.data[i] = -(alpha * yi / pi - (1.0 - alpha) * (1.0 - yi) / (1.0 - pi)) / n;
    }
    res.loss = -acc / n;
    ensure_finite(res.grad, "weighted_bce_loss grad");
    return res;
}

}  // namespace lfsal
