#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lfsal/errors.hpp"

namespace lfsal {

// Dense n-dimensional real array, row-major, 64-bit throughout.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s);

    static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }
    static Tensor full(std::vector<std::size_t> s, double value);

    std::size_t rank() const { return shape.size(); }
    std::size_t numel() const { return data.size(); }
    std::size_t extent(std::size_t axis) const;

    // 3-D accessor, shape [C,H,W].
    double& at3(std::size_t c, std::size_t y, std::size_t x) {
        return data[(c * shape[1] + y) * shape[2] + x];
    }
    double at3(std::size_t c, std::size_t y, std::size_t x) const {
        return data[(c * shape[1] + y) * shape[2] + x];
    }

    // 4-D accessor, shape [O,I,Kh,Kw].
    double& at4(std::size_t o, std::size_t i, std::size_t kh, std::size_t kw) {
        return data[((o * shape[1] + i) * shape[2] + kh) * shape[3] + kw];
    }
    double at4(std::size_t o, std::size_t i, std::size_t kh, std::size_t kw) const {
        return data[((o * shape[1] + i) * shape[2] + kh) * shape[3] + kw];
    }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

std::size_t shape_numel(const std::vector<std::size_t>& shape);
std::string shape_str(const std::vector<std::size_t>& shape);

// Throws NumericError naming `where` if any element is NaN/Inf.
void ensure_finite(const Tensor& t, const std::string& where);
void ensure_same_shape(const Tensor& a, const Tensor& b, const std::string& where);

}  // namespace lfsal
