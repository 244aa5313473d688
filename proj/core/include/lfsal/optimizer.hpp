#pragma once

#include <map>
#include <string>
#include <vector>

#include "lfsal/layers.hpp"
#include "lfsal/tensor.hpp"

namespace lfsal {

// A named, non-owning view of one layer's parameters. Models expose their
// layers as a flat ParamSet for the optimizer and the checkpoint writer.
struct ParamRef {
    std::string name;
    Tensor* weight = nullptr;
    Tensor* bias = nullptr;
};

using ParamSet = std::vector<ParamRef>;

// Gradients accumulated per layer name during a backward pass.
struct GradSet {
    std::map<std::string, ConvGrads> by_name;

    ConvGrads& at(const std::string& name) { return by_name[name]; }
    void clear() { by_name.clear(); }
};

// Velocity state for classical momentum; lazily shaped on first step.
struct SgdState {
    std::map<std::string, ConvGrads> velocity;
};

// v <- momentum * v + g;  w <- w - lr * v. Parameters without an entry in
// grads are left untouched (that is how freezing a sub-network works).
void sgd_momentum_step(ParamSet& params, const GradSet& grads, SgdState& state, double lr,
                       double momentum);

}  // namespace lfsal
