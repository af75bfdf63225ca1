// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-layer associative memory: a fast-weight matrix A and normalizer z that
// are read by every position of a segment and written once per segment from
// the memory-token outputs with a delta rule.
//
//   phi        = dpfp(k)
//   v_bar      = A phi / (z . phi)             (0 when |z . phi| <= eps)
//   gamma      = clamp(1 - (z . phi) / |phi|^2, 0, 1)   (0 when |phi|^2 <= eps)
//   A         += beta (v - v_bar) (x) phi
//   z         += gamma phi
//   read(q)    = A phi(q) / (z . phi(q))       (0 when |z . phi(q)| <= eps)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "armt/model/activation.hpp"
#include "armt/model/config.hpp"
#include "armt/model/weights.hpp"
#include "armt/tensor/tensor.hpp"

namespace armt::model {

/// Deterministic parameter-free projection: with r = [relu(x), relu(-x)],
/// output block j (j = 1..nu) is r * roll(r, j). Output length 2 * nu * x.size(),
/// every component non-negative.
template <Real T>
std::vector<T> dpfp(std::span<const T> x, std::size_t nu);

template <Real T>
void dpfp_into(std::span<const T> x, std::size_t nu, std::span<T> out);

template <Real T>
struct MemoryState {
    std::vector<Tensor<T>> A;       // per layer: d_model x feature_dim
    std::vector<std::vector<T>> z;  // per layer: feature_dim
    std::vector<std::size_t> updates;

    static MemoryState fresh(const ModelConfig& config);

    std::size_t n_layers() const { return A.size(); }
};

/// Retrieval term for feature vector `phi` at layer l, written to `out`
/// (length d_model). Returns false, leaving `out` zeroed, when the guard fires.
template <Real T>
bool assoc_lookup(const MemoryState<T>& state, std::size_t l, std::span<const T> phi, T eps,
                  std::span<T> out);

/// Adds the associative read to every row of `hidden` in place. Rows whose
/// guard fires are left bit-for-bit untouched.
template <Real T>
void assoc_retrieve_inplace(const MemoryState<T>& state, std::size_t l,
                            const LayerWeights<T>& weights, const ModelConfig& config,
                            MatrixView<T> hidden);

template <Real T>
SegmentActivation<T> assoc_retrieve(const MemoryState<T>& state, std::size_t l,
                                    const LayerWeights<T>& weights, const ModelConfig& config,
                                    SegmentActivation<T> x);

/// Delta-rule write of explicit (key, value, beta) triples, folded in row
/// order so each row sees the writes of the rows before it. Counts as one update.
template <Real T>
void assoc_write(MemoryState<T>& state, std::size_t l, ConstMatrixView<T> keys,
                 ConstMatrixView<T> values, std::span<const T> betas, std::size_t nu, T eps);

/// Projects memory-token outputs to keys, values and betas and writes them.
template <Real T>
void assoc_update(MemoryState<T>& state, std::size_t l, const LayerWeights<T>& weights,
                  const ModelConfig& config, ConstMatrixView<T> mem_out);

}  // namespace armt::model
