// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Library side of the armt_cli subcommands, callable from tests.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armt/exec/trace.hpp"
#include "armt/harness/reports.hpp"
#include "armt/model/container.hpp"
#include "armt/model/embed.hpp"

namespace armt::harness {

/// Uniform token ids in [0, vocab) from a seeded generator.
std::vector<model::TokenId> random_tokens(std::size_t count, std::size_t vocab, std::uint64_t seed);

struct VerifyOptions {
    std::vector<std::size_t> segments{1, 2, 4, 8, 16, 32};
    std::vector<Precision> precisions{Precision::F32, Precision::F64};
    std::uint64_t token_seed = 0;
    std::size_t threads = 1;
};

/// Runs both executors per segment count and compares their logits.
VerifyReport run_verify(const model::Container& container, const VerifyOptions& options);

struct BenchOptions {
    std::vector<std::size_t> seq_lens;
    std::vector<std::string> modes{"sequential", "diagonal", "minibatch"};
    std::vector<std::size_t> threads{1};
    std::size_t repeat = 3;
    Precision precision = Precision::F32;
    std::uint64_t token_seed = 0;
};

/// Median wall time over `repeat` timed runs, after one discarded warmup.
BenchReport run_bench(const model::Container& container, const BenchOptions& options);

exec::ExecutionTrace run_trace(const model::Container& container, std::size_t seq_len,
                               exec::ScheduleKind kind, std::size_t threads = 1,
                               std::uint64_t token_seed = 0);

}  // namespace armt::harness
