#include <limits>

#include "doctest.h"
#include "lfsal/errors.hpp"
#include "lfsal/tensor.hpp"

using namespace lfsal;

TEST_CASE("tensor construction and indexing") {
    Tensor t = Tensor::zeros({2, 3, 4});
    CHECK(t.rank() == 3);
    CHECK(t.numel() == 24);
    CHECK(t.extent(0) == 2);
    CHECK(t.extent(2) == 4);
    for (double v : t.data) CHECK(v == 0.0);

    Tensor f = Tensor::full({2, 2}, 1.5);
    for (double v : f.data) CHECK(v == 1.5);

    // row-major layout: last index fastest
    t.at3(1, 2, 3) = 7.0;
    CHECK(t.data[(1 * 3 + 2) * 4 + 3] == 7.0);

    Tensor q = Tensor::zeros({2, 3, 4, 5});
    q.at4(1, 2, 3, 4) = 9.0;
    CHECK(q.data[((1 * 3 + 2) * 4 + 3) * 5 + 4] == 9.0);
}

TEST_CASE("tensor validation") {
    Tensor t = Tensor::zeros({2, 2});
    CHECK_THROWS_AS((void)t.extent(2), DimensionError);
    CHECK_THROWS_AS(Tensor::zeros({3, 0}), DimensionError);
    CHECK_THROWS_AS(Tensor::zeros({}), DimensionError);

    t.data[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ensure_finite(t, "t"), NumericError);
    t.data[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(ensure_finite(t, "t"), NumericError);
    t.data[1] = 0.0;
    CHECK_NOTHROW(ensure_finite(t, "t"));

    Tensor u = Tensor::zeros({2, 3});
    CHECK_THROWS_AS(ensure_same_shape(t, u, "pair"), DimensionError);
    CHECK(shape_str({1, 16, 16}) == "[1,16,16]");
}

TEST_CASE("default tensor is empty") {
    Tensor t;
    CHECK(t.numel() == 0);
    CHECK(t.rank() == 0);
}
