// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/tensor/kernels.hpp"

namespace armt::kernels::scalar {

template <Real T>
void gemm(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        T* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            ci[j] = T{0};
        }
        const T* ai = a + i * k;
        for (std::size_t t = 0; t < k; ++t) {
            const T av = ai[t];
            const T* bt = b + t * n;
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] = ci[j] + av * bt[j];
            }
        }
    }
}

template <Real T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = y[i] + alpha * x[i];
    }
}

template <Real T>
void add_inplace(const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = y[i] + x[i];
    }
}

template void gemm<float>(const float*, const float*, float*, std::size_t, std::size_t, std::size_t);
template void gemm<double>(const double*, const double*, double*, std::size_t, std::size_t,
                           std::size_t);
template void axpy<float>(float, const float*, float*, std::size_t);
template void axpy<double>(double, const double*, double*, std::size_t);
template void add_inplace<float>(const float*, float*, std::size_t);
template void add_inplace<double>(const double*, double*, std::size_t);

}  // namespace armt::kernels::scalar
