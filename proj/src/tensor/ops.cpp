// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace armt {

template <Real T>
Tensor<T> gemm(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows()) {
        throw DimensionError("gemm: cannot multiply " + shape_string(a.shape()) + " by " +
                             shape_string(b.shape()));
    }
    Tensor<T> c = Tensor<T>::matrix(a.rows(), b.cols());
    kernels::gemm<T>(a.view(), b.view(), c.view());
    return c;
}

template <Real T>
void grouped_gemm(std::span<const ConstMatrixView<T>> as, std::span<const ConstMatrixView<T>> bs,
                  GroupedBuffer<T>& out, ThreadPool* pool) {
    const std::size_t group = as.size();
    if (bs.size() != group || out.group_size() != group) {
        throw DimensionError("grouped_gemm: group sizes differ (a=" + std::to_string(group) +
                             ", b=" + std::to_string(bs.size()) +
                             ", out=" + std::to_string(out.group_size()) + ")");
    }
    if (group == 0) {
        return;
    }
    for (std::size_t g = 0; g < group; ++g) {
        if (as[g].rows != as[0].rows || as[g].cols != as[0].cols || bs[g].rows != bs[0].rows ||
            bs[g].cols != bs[0].cols) {
            throw DimensionError("grouped_gemm: member " + std::to_string(g) +
                                 " has a different shape from member 0");
        }
    }
    const Shape expected{as[0].rows, bs[0].cols};
    if (out.member_shape() != expected || as[0].cols != bs[0].rows) {
        throw DimensionError("grouped_gemm: members [" + std::to_string(as[0].rows) + "x" +
                             std::to_string(as[0].cols) + "]*[" + std::to_string(bs[0].rows) +
                             "x" + std::to_string(bs[0].cols) + "] do not fit output members " +
                             shape_string(out.member_shape()));
    }
    auto run = [&](std::size_t g, std::size_t) { kernels::gemm<T>(as[g], bs[g], out.matrix(g)); };
    if (pool) {
        pool->parallel_for(group, run);
    } else {
        for (std::size_t g = 0; g < group; ++g) run(g, 0);
    }
}

template <Real T>
GroupedBuffer<T> grouped_gemm(const std::vector<Tensor<T>>& as, const std::vector<Tensor<T>>& bs,
                              GroupedBuffer<T> out, ThreadPool* pool) {
    std::vector<ConstMatrixView<T>> av, bv;
    av.reserve(as.size());
    bv.reserve(bs.size());
    for (const auto& a : as) av.push_back(a.view());
    for (const auto& b : bs) bv.push_back(b.view());
    grouped_gemm<T>(av, bv, out, pool);
    return out;
}

template <Real T>
void rms_norm_rows(ConstMatrixView<T> x, std::span<const T> gain, T eps, MatrixView<T> out) {
    if (gain.size() != x.cols || out.rows != x.rows || out.cols != x.cols) {
        throw DimensionError("rms_norm: gain length " + std::to_string(gain.size()) +
                             " or output shape does not match input width " +
                             std::to_string(x.cols));
    }
    const T width = static_cast<T>(x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const T* xr = x.row(r);
        T* yr = out.row(r);
        T sum_sq = T{0};
        for (std::size_t c = 0; c < x.cols; ++c) {
            sum_sq = sum_sq + xr[c] * xr[c];
        }
        const T inv_rms = T{1} / std::sqrt(sum_sq / width + eps);
        for (std::size_t c = 0; c < x.cols; ++c) {
            yr[c] = xr[c] * inv_rms * gain[c];
        }
    }
}

template <Real T>
void rms_norm_stacked(const GroupedBuffer<T>& x, ConstMatrixView<T> gains, T eps,
                      GroupedBuffer<T>& out, ThreadPool* pool) {
    if (x.member_shape().size() != 2 || gains.rows != x.group_size() ||
        gains.cols != x.member_shape()[1]) {
        throw DimensionError("rms_norm_stacked: gains [" + std::to_string(gains.rows) + "x" +
                             std::to_string(gains.cols) + "] do not broadcast over " +
                             std::to_string(x.group_size()) + " members of " +
                             shape_string(x.member_shape()));
    }
    if (out.group_size() != x.group_size() || out.member_shape() != x.member_shape()) {
        throw DimensionError("rms_norm_stacked: output buffer shape mismatch");
    }
    auto run = [&](std::size_t g, std::size_t) {
        rms_norm_rows<T>(x.matrix(g), std::span<const T>(gains.row(g), gains.cols), eps,
                         out.matrix(g));
    };
    if (pool) {
        pool->parallel_for(x.group_size(), run);
    } else {
        for (std::size_t g = 0; g < x.group_size(); ++g) run(g, 0);
    }
}

template <Real T>
Tensor<T> rms_norm_stacked(const Tensor<T>& x, const Tensor<T>& gains, T eps) {
    if (x.rank() != 3 || gains.rank() != 2) {
        throw DimensionError("rms_norm_stacked: expected x [G x T x d] and gains [G x d], got " +
                             shape_string(x.shape()) + " and " + shape_string(gains.shape()));
    }
    GroupedBuffer<T> in(x.dim(0), {x.dim(1), x.dim(2)});
    std::copy(x.data().begin(), x.data().end(), in.backing().begin());
    GroupedBuffer<T> out(x.dim(0), {x.dim(1), x.dim(2)});
    rms_norm_stacked<T>(in, gains.view(), eps, out);
    return Tensor<T>(x.shape(), std::vector<T>(out.backing().begin(), out.backing().end()));
}

template <Real T>
Tensor<T> transpose(ConstMatrixView<T> m) {
    Tensor<T> t = Tensor<T>::matrix(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            t.at(c, r) = m(r, c);
        }
    }
    return t;
}

template <Real T>
void matvec(ConstMatrixView<T> w, std::span<const T> x, std::span<T> y) {
    if (x.size() != w.cols || y.size() != w.rows) {
        throw DimensionError("matvec: [" + std::to_string(w.rows) + "x" + std::to_string(w.cols) +
                             "] applied to length " + std::to_string(x.size()));
    }
    for (std::size_t r = 0; r < w.rows; ++r) {
        const T* wr = w.row(r);
        T acc = T{0};
        for (std::size_t c = 0; c < w.cols; ++c) {
            acc = acc + wr[c] * x[c];
        }
        y[r] = acc;
    }
}

template <Real T>
T dot(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) {
        throw DimensionError("dot: length mismatch");
    }
    T acc = T{0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc = acc + a[i] * b[i];
    }
    return acc;
}

template <Real T>
void softmax_prefix_rows(MatrixView<T> m, std::span<const std::size_t> valid) {
    if (valid.size() != m.rows) {
        throw DimensionError("softmax: one valid length per row required");
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
        T* row = m.row(r);
        const std::size_t n = std::min(valid[r], m.cols);
        T mx = -std::numeric_limits<T>::infinity();
        for (std::size_t c = 0; c < n; ++c) mx = std::max(mx, row[c]);
        T total = T{0};
        for (std::size_t c = 0; c < n; ++c) {
            row[c] = std::exp(row[c] - mx);
            total = total + row[c];
        }
        for (std::size_t c = 0; c < n; ++c) row[c] = row[c] / total;
        for (std::size_t c = n; c < m.cols; ++c) row[c] = T{0};
    }
}

template <Real T>
T sigmoid(T x) {
    return T{1} / (T{1} + std::exp(-x));
}

template <Real T>
T silu(T x) {
    return x * sigmoid(x);
}

#define ARMT_INSTANTIATE_OPS(T)                                                                    \
    template Tensor<T> gemm<T>(const Tensor<T>&, const Tensor<T>&);                                \
    template void grouped_gemm<T>(std::span<const ConstMatrixView<T>>,                             \
                                  std::span<const ConstMatrixView<T>>, GroupedBuffer<T>&,          \
                                  ThreadPool*);                                                    \
    template GroupedBuffer<T> grouped_gemm<T>(const std::vector<Tensor<T>>&,                       \
                                              const std::vector<Tensor<T>>&, GroupedBuffer<T>,     \
                                              ThreadPool*);                                        \
    template void rms_norm_rows<T>(ConstMatrixView<T>, std::span<const T>, T, MatrixView<T>);      \
    template void rms_norm_stacked<T>(const GroupedBuffer<T>&, ConstMatrixView<T>, T,              \
                                      GroupedBuffer<T>&, ThreadPool*);                             \
    template Tensor<T> rms_norm_stacked<T>(const Tensor<T>&, const Tensor<T>&, T);                 \
    template Tensor<T> transpose<T>(ConstMatrixView<T>);                                           \
    template void matvec<T>(ConstMatrixView<T>, std::span<const T>, std::span<T>);                 \
    template T dot<T>(std::span<const T>, std::span<const T>);                                     \
    template void softmax_prefix_rows<T>(MatrixView<T>, std::span<const std::size_t>);             \
    template T sigmoid<T>(T);                                                                      \
    template T silu<T>(T);

ARMT_INSTANTIATE_OPS(float)
ARMT_INSTANTIATE_OPS(double)

}  // namespace armt
