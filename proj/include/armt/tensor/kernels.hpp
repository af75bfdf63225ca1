// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Inner-loop kernels. Every kernel has a scalar reference implementation and,
// where the host supports it, a vector variant. The vector variants keep the
// per-element operation order of the scalar ones (vectorized across output
// columns, separate multiply and add), so all variants agree bitwise.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "armt/tensor/tensor.hpp"

namespace armt::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

/// True when the variant is compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// Best available variant, unless ARMT_ISA names another available one.
Isa detect_isa();

Isa active_isa();

/// Switches the process-wide variant. Throws if `isa` is not available.
void set_active_isa(Isa isa);

// c[m x n] = a[m x k] * b[k x n]. Each c[i][j] is accumulated from zero over
// t = 0..k-1 in increasing order.
template <Real T>
void gemm(ConstMatrixView<T> a, ConstMatrixView<T> b, MatrixView<T> c);

// y[i] += alpha * x[i]
template <Real T>
void axpy(T alpha, std::span<const T> x, std::span<T> y);

// y[i] += x[i]
template <Real T>
void add_inplace(std::span<const T> x, std::span<T> y);

namespace scalar {
template <Real T>
void gemm(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n);
template <Real T>
void axpy(T alpha, const T* x, T* y, std::size_t n);
template <Real T>
void add_inplace(const T* x, T* y, std::size_t n);
}  // namespace scalar

#if defined(ARMT_HAVE_AVX2)
namespace avx2 {
void gemm(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n);
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void axpy(float alpha, const float* x, float* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void add_inplace(const float* x, float* y, std::size_t n);
void add_inplace(const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(ARMT_HAVE_NEON)
namespace neon {
void gemm(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n);
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void axpy(float alpha, const float* x, float* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void add_inplace(const float* x, float* y, std::size_t n);
void add_inplace(const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace armt::kernels
