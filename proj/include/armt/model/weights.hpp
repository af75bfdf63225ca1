// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Model parameters. Per-layer tensors are stacked along a leading layer axis so
// that a group of layers can be served by one grouped GEMM call, each member
// indexing its own slab.

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "armt/model/config.hpp"
#include "armt/tensor/tensor.hpp"

namespace armt::model {

/// Non-owning view of one layer's parameters, sliced out of GroupedWeights.
template <Real T>
struct LayerWeights {
    ConstMatrixView<T> wq, wk, wv, wo;  // d_model x d_model
    ConstMatrixView<T> w_gate, w_up;    // d_model x d_ff
    ConstMatrixView<T> w_down;          // d_ff x d_model
    std::span<const T> attn_norm;       // d_model
    std::span<const T> mlp_norm;        // d_model
    ConstMatrixView<T> mem_wk;          // d_mem x d_model
    ConstMatrixView<T> mem_wv;          // d_model x d_model
    ConstMatrixView<T> mem_wbeta;       // 1 x d_model
    ConstMatrixView<T> mem_wq;          // d_mem x d_model
};

template <Real T>
struct GroupedWeights {
    Tensor<T> wq, wk, wv, wo;
    Tensor<T> w_gate, w_up, w_down;
    Tensor<T> attn_norm, mlp_norm;  // L x d_model
    Tensor<T> mem_wk, mem_wv, mem_wbeta, mem_wq;
    Tensor<T> embedding;    // vocab x d_model
    Tensor<T> unembedding;  // d_model x vocab
    Tensor<T> mem_tokens;   // num_mem_tokens x d_model

    std::size_t n_layers() const { return wq.rank() ? wq.dim(0) : 0; }
    LayerWeights<T> layer(std::size_t l) const;

    /// Every tensor with its container name, in serialization order.
    void for_each(const std::function<void(const std::string&, const Tensor<T>&)>& fn) const;
    void for_each_mut(const std::function<void(const std::string&, Tensor<T>&)>& fn);
};

/// Shape each named tensor must have under `config`.
Shape expected_shape(const ModelConfig& config, const std::string& name);

/// Throws DimensionError if any tensor's shape disagrees with `config`.
template <Real T>
void check_shapes(const ModelConfig& config, const GroupedWeights<T>& weights);

/// Deterministic initialization: Gaussian scaled by 1/sqrt(fan_in) for every
/// projection, ones for norm gains, unit Gaussian for embedding rows.
GroupedWeights<double> init_weights(const ModelConfig& config);

/// All-zero projections with unit gains.
template <Real T>
GroupedWeights<T> zero_weights(const ModelConfig& config);

template <Real To, Real From>
GroupedWeights<To> cast_weights(const GroupedWeights<From>& w) {
    GroupedWeights<To> out;
    std::vector<const Tensor<From>*> src;
    w.for_each([&](const std::string&, const Tensor<From>& t) { src.push_back(&t); });
    std::size_t i = 0;
    out.for_each_mut([&](const std::string&, Tensor<To>& t) { t = cast<To>(*src[i++]); });
    return out;
}

}  // namespace armt::model
