// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "armt/model/activation.hpp"
#include "armt/model/config.hpp"
#include "armt/model/weights.hpp"

namespace armt::model {

using TokenId = std::uint32_t;

/// Embedding rows for `tokens` (exactly segment_size of them) followed by the
/// memory-token rows. Throws InputError for ids >= vocab_size.
template <Real T>
SegmentActivation<T> embed(const GroupedWeights<T>& weights, const ModelConfig& config,
                           std::span<const TokenId> tokens, std::size_t segment_index = 0);

/// logits = activations * unembedding
template <Real T>
Tensor<T> unembed(const GroupedWeights<T>& weights, ConstMatrixView<T> activations);

}  // namespace armt::model
