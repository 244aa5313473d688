#pragma once

#include "lfsal/layers.hpp"
#include "lfsal/rng.hpp"

// He-uniform fan-in initialization: weights ~ U(-sqrt(6/fan_in), +sqrt(6/fan_in)),
// biases zero. An optional gain rescales the limit (used to keep the encoder's
// linear output head small at the start of training).

namespace lfsal {

void init_conv_he(ConvLayer& layer, Rng& rng, double gain = 1.0);
void init_dense_he(DenseLayer& layer, Rng& rng, double gain = 1.0);

}  // namespace lfsal
