#include "lfsal/init.hpp"

#include <cmath>

namespace lfsal {

void init_conv_he(ConvLayer& layer, Rng& rng, double gain) {
    const double fan_in =
        (double)(layer.spec.in_channels * layer.spec.kernel_h * layer.spec.kernel_w);
    const double limit = gain * std::sqrt(6.0 / fan_in);
    for (double& w : layer.weight.data) w = rng.uniform(-limit, limit);
    for (double& b : layer.bias.data) b = 0.0;
}

void init_dense_he(DenseLayer& layer, Rng& rng, double gain) {
    const double fan_in = (double)layer.weight.extent(1);
    const double limit = gain * std::sqrt(6.0 / fan_in);
    for (double& w : layer.weight.data) w = rng.uniform(-limit, limit);
    for (double& b : layer.bias.data) b = 0.0;
}

}  // namespace lfsal
