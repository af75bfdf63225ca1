// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// NEON variants for aarch64. Uses vmul + vadd rather than vfma so results
// match the scalar kernels bit for bit.

#include "armt/tensor/kernels.hpp"

#if defined(ARMT_HAVE_NEON)

#include <arm_neon.h>

namespace armt::kernels::neon {
namespace {

struct F32x4 {
    using scalar = float;
    using reg = float32x4_t;
    static constexpr std::size_t width = 4;
    static reg zero() { return vdupq_n_f32(0.0f); }
    static reg set1(float v) { return vdupq_n_f32(v); }
    static reg load(const float* p) { return vld1q_f32(p); }
    static void store(float* p, reg v) { vst1q_f32(p, v); }
    static reg mul(reg a, reg b) { return vmulq_f32(a, b); }
    static reg add(reg a, reg b) { return vaddq_f32(a, b); }
};

struct F64x2 {
    using scalar = double;
    using reg = float64x2_t;
    static constexpr std::size_t width = 2;
    static reg zero() { return vdupq_n_f64(0.0); }
    static reg set1(double v) { return vdupq_n_f64(v); }
    static reg load(const double* p) { return vld1q_f64(p); }
    static void store(double* p, reg v) { vst1q_f64(p, v); }
    static reg mul(reg a, reg b) { return vmulq_f64(a, b); }
    static reg add(reg a, reg b) { return vaddq_f64(a, b); }
};

template <class V>
void gemm_impl(const typename V::scalar* a, const typename V::scalar* b, typename V::scalar* c,
               std::size_t m, std::size_t k, std::size_t n) {
    using S = typename V::scalar;
    using R = typename V::reg;
    constexpr std::size_t W = V::width;
    for (std::size_t i = 0; i < m; ++i) {
        const S* ai = a + i * k;
        std::size_t j = 0;
        for (; j + 2 * W <= n; j += 2 * W) {
            R acc0 = V::zero(), acc1 = V::zero();
            for (std::size_t t = 0; t < k; ++t) {
                const R av = V::set1(ai[t]);
                acc0 = V::add(acc0, V::mul(av, V::load(b + t * n + j)));
                acc1 = V::add(acc1, V::mul(av, V::load(b + t * n + j + W)));
            }
            V::store(c + i * n + j, acc0);
            V::store(c + i * n + j + W, acc1);
        }
        for (; j < n; ++j) {
            S acc = S{0};
            for (std::size_t t = 0; t < k; ++t) {
                acc = acc + ai[t] * b[t * n + j];
            }
            c[i * n + j] = acc;
        }
    }
}

template <class V>
void axpy_impl(typename V::scalar alpha, const typename V::scalar* x, typename V::scalar* y,
               std::size_t n) {
    const auto av = V::set1(alpha);
    std::size_t i = 0;
    for (; i + V::width <= n; i += V::width) {
        V::store(y + i, V::add(V::load(y + i), V::mul(av, V::load(x + i))));
    }
    for (; i < n; ++i) {
        y[i] = y[i] + alpha * x[i];
    }
}

template <class V>
void add_impl(const typename V::scalar* x, typename V::scalar* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + V::width <= n; i += V::width) {
        V::store(y + i, V::add(V::load(y + i), V::load(x + i)));
    }
    for (; i < n; ++i) {
        y[i] = y[i] + x[i];
    }
}

}  // namespace

void gemm(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n) {
    gemm_impl<F32x4>(a, b, c, m, k, n);
}
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    gemm_impl<F64x2>(a, b, c, m, k, n);
}
void axpy(float alpha, const float* x, float* y, std::size_t n) { axpy_impl<F32x4>(alpha, x, y, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { axpy_impl<F64x2>(alpha, x, y, n); }
void add_inplace(const float* x, float* y, std::size_t n) { add_impl<F32x4>(x, y, n); }
void add_inplace(const double* x, double* y, std::size_t n) { add_impl<F64x2>(x, y, n); }

}  // namespace armt::kernels::neon

#endif  // ARMT_HAVE_NEON
