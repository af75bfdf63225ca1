// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2 variants. Built with -mavx2 only; callers reach these through the
// dispatcher after a CPUID check.

#include "armt/tensor/kernels.hpp"

#if defined(ARMT_HAVE_AVX2)

#include <immintrin.h>

namespace armt::kernels::avx2 {
namespace {

struct F32x8 {
    using scalar = float;
    using reg = __m256;
    static constexpr std::size_t width = 8;
    static reg zero() { return _mm256_setzero_ps(); }
    static reg set1(float v) { return _mm256_set1_ps(v); }
    static reg load(const float* p) { return _mm256_loadu_ps(p); }
    static void store(float* p, reg v) { _mm256_storeu_ps(p, v); }
    static reg mul(reg a, reg b) { return _mm256_mul_ps(a, b); }
    static reg add(reg a, reg b) { return _mm256_add_ps(a, b); }
};

struct F64x4 {
    using scalar = double;
    using reg = __m256d;
    static constexpr std::size_t width = 4;
    static reg zero() { return _mm256_setzero_pd(); }
    static reg set1(double v) { return _mm256_set1_pd(v); }
    static reg load(const double* p) { return _mm256_loadu_pd(p); }
    static void store(double* p, reg v) { _mm256_storeu_pd(p, v); }
    static reg mul(reg a, reg b) { return _mm256_mul_pd(a, b); }
    static reg add(reg a, reg b) { return _mm256_add_pd(a, b); }
};

template <class V>
void gemm_impl(const typename V::scalar* a, const typename V::scalar* b, typename V::scalar* c,
               std::size_t m, std::size_t k, std::size_t n) {
    using S = typename V::scalar;
    using R = typename V::reg;
    constexpr std::size_t W = V::width;

    auto scalar_tail = [&](std::size_t i, std::size_t j_begin) {
        for (std::size_t j = j_begin; j < n; ++j) {
            S acc = S{0};
            for (std::size_t t = 0; t < k; ++t) {
                acc = acc + a[i * k + t] * b[t * n + j];
            }
            c[i * n + j] = acc;
        }
    };

    std::size_t i = 0;
    // 4 rows x 2 registers micro-tile.
    for (; i + 4 <= m; i += 4) {
        const S* a0 = a + (i + 0) * k;
        const S* a1 = a + (i + 1) * k;
        const S* a2 = a + (i + 2) * k;
        const S* a3 = a + (i + 3) * k;
        std::size_t j = 0;
        for (; j + 2 * W <= n; j += 2 * W) {
            R c00 = V::zero(), c01 = V::zero();
            R c10 = V::zero(), c11 = V::zero();
            R c20 = V::zero(), c21 = V::zero();
            R c30 = V::zero(), c31 = V::zero();
            for (std::size_t t = 0; t < k; ++t) {
                const R b0 = V::load(b + t * n + j);
                const R b1 = V::load(b + t * n + j + W);
                R av = V::set1(a0[t]);
                c00 = V::add(c00, V::mul(av, b0));
                c01 = V::add(c01, V::mul(av, b1));
                av = V::set1(a1[t]);
                c10 = V::add(c10, V::mul(av, b0));
                c11 = V::add(c11, V::mul(av, b1));
                av = V::set1(a2[t]);
                c20 = V::add(c20, V::mul(av, b0));
                c21 = V::add(c21, V::mul(av, b1));
                av = V::set1(a3[t]);
                c30 = V::add(c30, V::mul(av, b0));
                c31 = V::add(c31, V::mul(av, b1));
            }
            V::store(c + (i + 0) * n + j, c00);
            V::store(c + (i + 0) * n + j + W, c01);
            V::store(c + (i + 1) * n + j, c10);
            V::store(c + (i + 1) * n + j + W, c11);
            V::store(c + (i + 2) * n + j, c20);
            V::store(c + (i + 2) * n + j + W, c21);
            V::store(c + (i + 3) * n + j, c30);
            V::store(c + (i + 3) * n + j + W, c31);
        }
        for (; j + W <= n; j += W) {
            R c0 = V::zero(), c1 = V::zero(), c2 = V::zero(), c3 = V::zero();
            for (std::size_t t = 0; t < k; ++t) {
                const R bv = V::load(b + t * n + j);
                c0 = V::add(c0, V::mul(V::set1(a0[t]), bv));
                c1 = V::add(c1, V::mul(V::set1(a1[t]), bv));
                c2 = V::add(c2, V::mul(V::set1(a2[t]), bv));
                c3 = V::add(c3, V::mul(V::set1(a3[t]), bv));
            }
            V::store(c + (i + 0) * n + j, c0);
            V::store(c + (i + 1) * n + j, c1);
            V::store(c + (i + 2) * n + j, c2);
            V::store(c + (i + 3) * n + j, c3);
        }
        for (std::size_t r = 0; r < 4; ++r) {
            scalar_tail(i + r, j);
        }
    }
    for (; i < m; ++i) {
        const S* ai = a + i * k;
        std::size_t j = 0;
        for (; j + W <= n; j += W) {
            R acc = V::zero();
            for (std::size_t t = 0; t < k; ++t) {
                acc = V::add(acc, V::mul(V::set1(ai[t]), V::load(b + t * n + j)));
            }
            V::store(c + i * n + j, acc);
        }
        scalar_tail(i, j);
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
    gemm_impl<F32x8>(a, b, c, m, k, n);
}
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    gemm_impl<F64x4>(a, b, c, m, k, n);
}
void axpy(float alpha, const float* x, float* y, std::size_t n) { axpy_impl<F32x8>(alpha, x, y, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { axpy_impl<F64x4>(alpha, x, y, n); }
void add_inplace(const float* x, float* y, std::size_t n) { add_impl<F32x8>(x, y, n); }
void add_inplace(const double* x, double* y, std::size_t n) { add_impl<F64x4>(x, y, n); }

}  // namespace armt::kernels::avx2

#endif  // ARMT_HAVE_AVX2
