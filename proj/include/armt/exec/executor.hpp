// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Full forward passes over a long token sequence.
//
// run_sequential visits the (segment, layer) grid one node at a time, segments
// outermost. run_diagonal keeps a list of in-flight segments, newest first;
// each step ingests the next segment, reads every member's layer memory, runs
// one grouped layer call over all members, writes every member's layer memory
// from its memory-token outputs, and retires the oldest segment once it has
// passed the top layer. That takes S + L - 1 steps instead of S * L.

#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "armt/exec/segment.hpp"
#include "armt/exec/trace.hpp"
#include "armt/model/assoc.hpp"
#include "armt/model/weights.hpp"
#include "armt/tensor/thread_pool.hpp"

namespace armt::exec {

struct RunOptions {
    std::size_t threads = 1;
    // When set, members of each group are processed in a seeded random order.
    std::optional<std::uint64_t> member_shuffle_seed;
    // Borrowed pool; overrides `threads` when non-null.
    ThreadPool* pool = nullptr;
};

template <Real T>
struct RunResult {
    Tensor<T> logits;  // original_length x vocab_size
    ExecutionTrace trace;
    model::MemoryState<T> memory;
};

template <Real T>
RunResult<T> run_sequential(const model::GroupedWeights<T>& weights,
                            const model::ModelConfig& config, std::span<const TokenId> tokens);

template <Real T>
RunResult<T> run_diagonal(const model::GroupedWeights<T>& weights, const model::ModelConfig& config,
                          std::span<const TokenId> tokens, const RunOptions& options = {});

/// ||a - b||_F / ||b||_F with b the baseline, accumulated in double. 0 when
/// both are zero.
template <Real T>
double relative_error(const Tensor<T>& a, const Tensor<T>& b);

template <Real T>
double relative_error(std::span<const T> a, std::span<const T> b);

}  // namespace armt::exec
