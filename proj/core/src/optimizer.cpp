#include "lfsal/optimizer.hpp"

#include <set>

namespace lfsal {

void sgd_momentum_step(ParamSet& params, const GradSet& grads, SgdState& state, double lr,
                       double momentum) {
    if (lr < 0.0) throw NumericError("learning rate must be non-negative");
    std::set<std::string> names;
    for (const ParamRef& p : params)
        if (!names.insert(p.name).second)
            throw DimensionError("duplicate parameter name " + p.name);

    for (ParamRef& p : params) {
        const auto it = grads.by_name.find(p.name);
        if (it == grads.by_name.end()) continue;
        const ConvGrads& g = it->second;
        ensure_same_shape(g.weight, *p.weight, "sgd grads for " + p.name);
        ensure_same_shape(g.bias, *p.bias, "sgd bias grads for " + p.name);

        ConvGrads& v = state.velocity[p.name];
        if (v.weight.numel() == 0) {
            v.weight = Tensor::zeros(p.weight->shape);
            v.bias = Tensor::zeros(p.bias->shape);
        }
        ensure_same_shape(v.weight, *p.weight, "sgd velocity for " + p.name);
        for (std::size_t i = 0; i < v.weight.numel(); ++i) {
            v.weight.data[i] = momentum * v.weight.data[i] + g.weight.data[i];
            p.weight->data[i] -= lr * v.weight.data[i];
        }
        for (std::size_t i = 0; i < v.bias.numel(); ++i) {
            v.bias.data[i] = momentum * v.bias.data[i] + g.bias.data[i];
            p.bias->data[i] -= lr * v.bias.data[i];
        }
    }
}

}  // namespace lfsal
