// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Tensor-level operations built on the kernels: GEMM, grouped GEMM into a
// single pre-allocated buffer, stacked RMS normalization and small helpers.

#pragma once

#include <span>
#include <vector>

#include "armt/tensor/kernels.hpp"
#include "armt/tensor/tensor.hpp"
#include "armt/tensor/thread_pool.hpp"

namespace armt {

template <Real T>
Tensor<T> gemm(const Tensor<T>& a, const Tensor<T>& b);

/// Member g of `out` receives as[g] * bs[g], computed exactly like gemm().
/// Members run on `pool` when given; each writes only its own slice.
template <Real T>
void grouped_gemm(std::span<const ConstMatrixView<T>> as, std::span<const ConstMatrixView<T>> bs,
                  GroupedBuffer<T>& out, ThreadPool* pool = nullptr);

template <Real T>
GroupedBuffer<T> grouped_gemm(const std::vector<Tensor<T>>& as, const std::vector<Tensor<T>>& bs,
                              GroupedBuffer<T> out, ThreadPool* pool = nullptr);

/// y_row = x_row / sqrt(mean(x_row^2) + eps) * gain
template <Real T>
void rms_norm_rows(ConstMatrixView<T> x, std::span<const T> gain, T eps, MatrixView<T> out);

/// x is [G x rows x d] stored as G matrix slices, gains is [G x d]. Member g is
/// normalized with gains row g.
template <Real T>
void rms_norm_stacked(const GroupedBuffer<T>& x, ConstMatrixView<T> gains, T eps,
                      GroupedBuffer<T>& out, ThreadPool* pool = nullptr);

template <Real T>
Tensor<T> rms_norm_stacked(const Tensor<T>& x, const Tensor<T>& gains, T eps);

template <Real T>
Tensor<T> transpose(ConstMatrixView<T> m);

/// y = W x, reduced left to right over the columns of W.
template <Real T>
void matvec(ConstMatrixView<T> w, std::span<const T> x, std::span<T> y);

template <Real T>
T dot(std::span<const T> a, std::span<const T> b);

/// In-place numerically stable softmax of each row over its first `valid` columns;
/// columns past `valid` are set to zero.
template <Real T>
void softmax_prefix_rows(MatrixView<T> m, std::span<const std::size_t> valid);

template <Real T>
T sigmoid(T x);

template <Real T>
T silu(T x);

}  // namespace armt
