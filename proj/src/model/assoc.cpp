// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/model/assoc.hpp"

#include <algorithm>
#include <cmath>

#include "armt/tensor/ops.hpp"

namespace armt::model {

template <Real T>
MemoryState<T> MemoryState<T>::fresh(const ModelConfig& config) {
    MemoryState s;
    const std::size_t f = config.feature_dim();
    s.A.assign(config.n_layers, Tensor<T>::matrix(config.d_model, f));
    s.z.assign(config.n_layers, std::vector<T>(f, T{0}));
    s.updates.assign(config.n_layers, 0);
    return s;
}

namespace {

template <Real T>
void require_layer(const MemoryState<T>& state, std::size_t l) {
    if (l >= state.n_layers()) {
        throw DimensionError("memory layer " + std::to_string(l) + " out of range (L=" +
                             std::to_string(state.n_layers()) + ")");
    }
}

}  // namespace

template <Real T>
bool assoc_lookup(const MemoryState<T>& state, std::size_t l, std::span<const T> phi, T eps,
                  std::span<T> out) {
    require_layer(state, l);
    std::fill(out.begin(), out.end(), T{0});
    const T denom = dot<T>(state.z[l], phi);
    if (!(std::abs(denom) > eps)) {
        return false;
    }
    matvec<T>(state.A[l].view(), phi, out);
    for (auto& v : out) {
        v = v / denom;
    }
    return true;
}

template <Real T>
void assoc_retrieve_inplace(const MemoryState<T>& state, std::size_t l,
                            const LayerWeights<T>& weights, const ModelConfig& config,
                            MatrixView<T> hidden) {
    require_layer(state, l);
    if (hidden.cols != config.d_model) {
        throw DimensionError("assoc_retrieve: hidden width " + std::to_string(hidden.cols) +
                             " != d_model " + std::to_string(config.d_model));
    }
    // A fresh layer memory reads as zero everywhere.
    if (state.updates[l] == 0) {
        return;
    }
    const T eps = config.eps_assoc<T>();
    std::vector<T> q(config.d_mem), phi(config.feature_dim()), read(config.d_model);
    for (std::size_t r = 0; r < hidden.rows; ++r) {
        std::span<T> row(hidden.row(r), hidden.cols);
        matvec<T>(weights.mem_wq, row, q);
        dpfp_into<T>(q, config.dpfp_nu, phi);
        if (assoc_lookup<T>(state, l, phi, eps, read)) {
            kernels::add_inplace<T>(read, row);
        }
    }
}

template <Real T>
SegmentActivation<T> assoc_retrieve(const MemoryState<T>& state, std::size_t l,
                                    const LayerWeights<T>& weights, const ModelConfig& config,
                                    SegmentActivation<T> x) {
    assoc_retrieve_inplace<T>(state, l, weights, config, x.hidden.view());
    return x;
}

template <Real T>
void assoc_write(MemoryState<T>& state, std::size_t l, ConstMatrixView<T> keys,
                 ConstMatrixView<T> values, std::span<const T> betas, std::size_t nu, T eps) {
    require_layer(state, l);
    Tensor<T>& A = state.A[l];
    std::vector<T>& z = state.z[l];
    if (keys.rows != values.rows || betas.size() != keys.rows) {
        throw DimensionError("assoc_write: " + std::to_string(keys.rows) + " keys, " +
                             std::to_string(values.rows) + " values, " +
                             std::to_string(betas.size()) + " betas");
    }
    if (2 * nu * keys.cols != z.size() || values.cols != A.rows()) {
        throw DimensionError("assoc_write: key/value widths do not match the memory shape");
    }
    std::vector<T> phi(z.size()), v_bar(A.rows());
    for (std::size_t i = 0; i < keys.rows; ++i) {
        dpfp_into<T>(std::span<const T>(keys.row(i), keys.cols), nu, phi);
        const T z_phi = dot<T>(z, phi);
        const T phi_sq = dot<T>(phi, phi);

        std::fill(v_bar.begin(), v_bar.end(), T{0});
        if (std::abs(z_phi) > eps) {
            matvec<T>(A.view(), phi, v_bar);
            for (auto& v : v_bar) v = v / z_phi;
        }
        const T gamma = phi_sq > eps ? std::clamp(T{1} - z_phi / phi_sq, T{0}, T{1}) : T{0};

        const T* v = values.row(i);
        for (std::size_t r = 0; r < A.rows(); ++r) {
            const T coeff = betas[i] * (v[r] - v_bar[r]);
            kernels::axpy<T>(coeff, phi, std::span<T>(A.view().row(r), A.cols()));
        }
        kernels::axpy<T>(gamma, phi, z);
    }
    ++state.updates[l];
}

template <Real T>
void assoc_update(MemoryState<T>& state, std::size_t l, const LayerWeights<T>& weights,
                  const ModelConfig& config, ConstMatrixView<T> mem_out) {
    if (mem_out.rows != config.num_mem_tokens || mem_out.cols != config.d_model) {
        throw DimensionError("assoc_update: expected " + std::to_string(config.num_mem_tokens) +
                             " memory rows of width " + std::to_string(config.d_model) + ", got [" +
                             std::to_string(mem_out.rows) + "x" + std::to_string(mem_out.cols) +
                             "]");
    }
    const std::size_t n = mem_out.rows;
    Tensor<T> keys = Tensor<T>::matrix(n, config.d_mem);
    Tensor<T> values = Tensor<T>::matrix(n, config.d_model);
    std::vector<T> betas(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const T> m(mem_out.row(i), mem_out.cols);
        matvec<T>(weights.mem_wk, m, std::span<T>(keys.view().row(i), config.d_mem));
        matvec<T>(weights.mem_wv, m, std::span<T>(values.view().row(i), config.d_model));
        betas[i] = sigmoid<T>(dot<T>(std::span<const T>(weights.mem_wbeta.row(0), config.d_model), m));
    }
    assoc_write<T>(state, l, keys.view(), values.view(), betas, config.dpfp_nu,
                   config.eps_assoc<T>());
}

#define ARMT_INSTANTIATE_ASSOC(T)                                                                  \
    template struct MemoryState<T>;                                                               \
    template bool assoc_lookup<T>(const MemoryState<T>&, std::size_t, std::span<const T>, T,       \
                                  std::span<T>);                                                   \
    template void assoc_retrieve_inplace<T>(const MemoryState<T>&, std::size_t,                    \
                                            const LayerWeights<T>&, const ModelConfig&,            \
                                            MatrixView<T>);                                        \
    template SegmentActivation<T> assoc_retrieve<T>(const MemoryState<T>&, std::size_t,            \
                                                    const LayerWeights<T>&, const ModelConfig&,    \
                                                    SegmentActivation<T>);                         \
    template void assoc_write<T>(MemoryState<T>&, std::size_t, ConstMatrixView<T>,                 \
                                 ConstMatrixView<T>, std::span<const T>, std::size_t, T);          \
    template void assoc_update<T>(MemoryState<T>&, std::size_t, const LayerWeights<T>&,            \
                                  const ModelConfig&, ConstMatrixView<T>);

ARMT_INSTANTIATE_ASSOC(float)
ARMT_INSTANTIATE_ASSOC(double)

}  // namespace armt::model
