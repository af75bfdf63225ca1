// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pre-norm decoder block over one segment's positions (segment tokens then
// memory tokens): RMS norm, causal multi-head attention with rotary positions
// restarting at 0 per segment, residual, RMS norm, gated SiLU MLP, residual.
//
// layer_forward() runs a single member with plain GEMM calls.
// grouped_layer_forward() runs several members at distinct layers through
// grouped GEMM over stacked weights and stacked norms. Both share every
// elementwise step, so a grouped member is bitwise equal to its single run.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "armt/model/activation.hpp"
#include "armt/model/config.hpp"
#include "armt/model/weights.hpp"
#include "armt/tensor/thread_pool.hpp"

namespace armt::model {

/// Applies layer `l` to `x` in place. Throws SchedulingError unless
/// x.layer_cursor == l; advances the cursor.
template <Real T>
void layer_forward(const LayerWeights<T>& weights, const ModelConfig& config, std::size_t l,
                   SegmentActivation<T>& x);

template <Real T>
struct GroupMember {
    std::size_t layer = 0;
    SegmentActivation<T>* activation = nullptr;
};

/// One grouped call over members at pairwise-distinct layers, in place.
template <Real T>
void grouped_layer_forward(const GroupedWeights<T>& weights, const ModelConfig& config,
                           std::span<const GroupMember<T>> members, ThreadPool* pool = nullptr);

/// Value-returning form: result[g] is members[g] pushed through its layer.
template <Real T>
std::vector<SegmentActivation<T>> grouped_layer_forward(
    const GroupedWeights<T>& weights, const ModelConfig& config,
    std::vector<std::pair<std::size_t, SegmentActivation<T>>> members, ThreadPool* pool = nullptr);

/// Rotary position encoding applied in place to every head of `m`;
/// row r is position r.
template <Real T>
void apply_rotary(MatrixView<T> m, std::size_t n_heads, double theta);

/// Causal softmax attention for all heads: q, k, v and out are positions x d_model.
template <Real T>
void causal_attention(ConstMatrixView<T> q, ConstMatrixView<T> k, ConstMatrixView<T> v,
                      std::size_t n_heads, MatrixView<T> out);

}  // namespace armt::model
