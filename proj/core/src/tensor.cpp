#include "lfsal/tensor.hpp"

#include <cmath>
#include <sstream>

namespace lfsal {

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    if (shape.empty()) throw DimensionError("tensor shape must name at least one axis");
    data.assign(shape_numel(shape), 0.0);
}

Tensor Tensor::full(std::vector<std::size_t> s, double value) {
    Tensor t(std::move(s));
    for (double& v : t.data) v = value;
    return t;
}

std::size_t Tensor::extent(std::size_t axis) const {
    if (axis >= shape.size())
        throw DimensionError("tensor axis " + std::to_string(axis) + " out of range for rank " +
                             std::to_string(shape.size()));
    return shape[axis];
}

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) {
        if (e == 0) throw DimensionError("tensor extent must be positive");
        n *= e;
    }
    return n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ",";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

void ensure_finite(const Tensor& t, const std::string& where) {
    for (double v : t.data) {
        if (!std::isfinite(v)) throw NumericError("non-finite value in " + where);
    }
}

void ensure_same_shape(const Tensor& a, const Tensor& b, const std::string& where) {
    if (!a.same_shape(b))
        throw DimensionError(where + ": shape mismatch " + shape_str(a.shape) + " vs " +
                             shape_str(b.shape));
}

}  // namespace lfsal
