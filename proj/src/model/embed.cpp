// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/model/embed.hpp"

#include <algorithm>

#include "armt/tensor/kernels.hpp"

namespace armt::model {

template <Real T>
SegmentActivation<T> embed(const GroupedWeights<T>& weights, const ModelConfig& config,
                           std::span<const TokenId> tokens, std::size_t segment_index) {
    if (tokens.size() != config.segment_size) {
        throw InputError("embed: got " + std::to_string(tokens.size()) +
                         " tokens for a segment of " + std::to_string(config.segment_size));
    }
    auto act = SegmentActivation<T>::zeros(config, segment_index);
    const std::size_t d = config.d_model;
    auto table = weights.embedding.view();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] >= config.vocab_size) {
            throw InputError("token id " + std::to_string(tokens[i]) + " at position " +
                             std::to_string(i) + " is outside the vocabulary of " +
                             std::to_string(config.vocab_size));
        }
        std::copy_n(table.row(tokens[i]), d, act.hidden.view().row(i));
    }
    auto mem = weights.mem_tokens.data();
    std::copy(mem.begin(), mem.end(), act.mem_part().data);
    return act;
}

template <Real T>
Tensor<T> unembed(const GroupedWeights<T>& weights, ConstMatrixView<T> activations) {
    Tensor<T> logits = Tensor<T>::matrix(activations.rows, weights.unembedding.cols());
    kernels::gemm<T>(activations, weights.unembedding.view(), logits.view());
    return logits;
}

template SegmentActivation<float> embed<float>(const GroupedWeights<float>&, const ModelConfig&,
                                               std::span<const TokenId>, std::size_t);
template SegmentActivation<double> embed<double>(const GroupedWeights<double>&, const ModelConfig&,
                                                 std::span<const TokenId>, std::size_t);
template Tensor<float> unembed<float>(const GroupedWeights<float>&, ConstMatrixView<float>);
template Tensor<double> unembed<double>(const GroupedWeights<double>&, ConstMatrixView<double>);

}  // namespace armt::model
