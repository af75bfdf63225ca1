// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "armt/model/assoc.hpp"

namespace armt::model {

template <Real T>
void dpfp_into(std::span<const T> x, std::size_t nu, std::span<T> out) {
    const std::size_t d = x.size();
    const std::size_t width = 2 * d;
    if (out.size() != nu * width) {
        throw DimensionError("dpfp: output length " + std::to_string(out.size()) + " != 2*nu*d = " +
                             std::to_string(nu * width));
    }
    if (d == 0) {
        return;
    }
    // r = [relu(x), relu(-x)]
    std::vector<T> r(width);
    for (std::size_t i = 0; i < d; ++i) {
        r[i] = std::max(x[i], T{0});
        r[d + i] = std::max(-x[i], T{0});
    }
    for (std::size_t j = 1; j <= nu; ++j) {
        T* block = out.data() + (j - 1) * width;
        const std::size_t shift = j % width;
        for (std::size_t i = 0; i < width; ++i) {
            // roll(r, j)[i] == r[(i - j) mod width]
            block[i] = r[i] * r[(i + width - shift) % width];
        }
    }
}

template <Real T>
std::vector<T> dpfp(std::span<const T> x, std::size_t nu) {
    std::vector<T> out(2 * nu * x.size());
    dpfp_into<T>(x, nu, out);
    return out;
}

template void dpfp_into<float>(std::span<const float>, std::size_t, std::span<float>);
template void dpfp_into<double>(std::span<const double>, std::size_t, std::span<double>);
template std::vector<float> dpfp<float>(std::span<const float>, std::size_t);
template std::vector<double> dpfp<double>(std::span<const double>, std::size_t);

}  // namespace armt::model
