// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/tensor/tensor.hpp"

#include <cmath>
#include <cstring>

namespace armt {

std::string to_string(DType dtype) { return dtype == DType::F32 ? "f32" : "f64"; }

std::size_t dtype_size(DType dtype) { return dtype == DType::F32 ? 4 : 8; }

std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (auto d : shape) {
        n *= d;
    }
    return n;
}

std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

template <Real T>
bool bitwise_equal(std::span<const T> a, std::span<const T> b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0);
}

template <Real T>
bool all_finite(std::span<const T> values) {
    for (T v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

template bool bitwise_equal<float>(std::span<const float>, std::span<const float>);
template bool bitwise_equal<double>(std::span<const double>, std::span<const double>);
template bool all_finite<float>(std::span<const float>);
template bool all_finite<double>(std::span<const double>);

}  // namespace armt
