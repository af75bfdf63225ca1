// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/exec/executor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <numeric>
#include <random>

#include "armt/model/embed.hpp"
#include "armt/model/layer.hpp"

namespace armt::exec {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count();
}

template <Real T>
void check_model(const model::GroupedWeights<T>& weights, const model::ModelConfig& config) {
    config.validate();
    try {
        model::check_shapes(config, weights);
    } catch (const DimensionError& e) {
        throw InputError(std::string("weights do not match config: ") + e.what());
    }
}

/// Writes the token rows of a finished segment into the output logits,
/// dropping rows past the original sequence length.
template <Real T>
void emit_logits(const model::GroupedWeights<T>& weights, const model::SegmentActivation<T>& act,
                 const SegmentedInput& input, Tensor<T>& logits) {
    const Tensor<T> seg_logits = model::unembed(weights, act.tokens_part());
    const std::size_t first_row = act.segment_index * act.segment_rows;
    const std::size_t rows = std::min(act.segment_rows, input.original_length - first_row);
    const auto src = seg_logits.data();
    std::copy_n(src.begin(), rows * seg_logits.cols(),
                logits.data().begin() + static_cast<std::ptrdiff_t>(first_row * seg_logits.cols()));
}

}  // namespace

template <Real T>
RunResult<T> run_sequential(const model::GroupedWeights<T>& weights,
                            const model::ModelConfig& config, std::span<const TokenId> tokens) {
    check_model(weights, config);
    const auto input = segment_input(tokens, config);
    const std::size_t L = config.n_layers;

    RunResult<T> result{Tensor<T>::matrix(input.original_length, config.vocab_size),
                        ExecutionTrace{ScheduleKind::Sequential, {}, 0},
                        model::MemoryState<T>::fresh(config)};
    const auto run_start = Clock::now();
    std::size_t step = 0;
    for (std::size_t s = 0; s < input.segments.size(); ++s) {
        auto act = model::embed<T>(weights, config, input.segments[s], s);
        for (std::size_t l = 0; l < L; ++l) {
            const auto t0 = Clock::now();
            const auto lw = weights.layer(l);
            model::assoc_retrieve_inplace<T>(result.memory, l, lw, config, act.hidden.view());
            model::layer_forward<T>(lw, config, l, act);
            model::assoc_update<T>(result.memory, l, lw, config, act.mem_part());
            result.trace.events.push_back({step++, {{s, l}}, {0}, elapsed_ns(t0)});
        }
        emit_logits(weights, act, input, result.logits);
    }
    result.trace.total_ns = elapsed_ns(run_start);
    return result;
}

template <Real T>
RunResult<T> run_diagonal(const model::GroupedWeights<T>& weights, const model::ModelConfig& config,
                          std::span<const TokenId> tokens, const RunOptions& options) {
    check_model(weights, config);
    const auto input = segment_input(tokens, config);
    const std::size_t S = input.segments.size();
    const std::size_t L = config.n_layers;

    std::unique_ptr<ThreadPool> owned_pool;
    ThreadPool* pool = options.pool;
    if (!pool && options.threads > 1) {
        owned_pool = std::make_unique<ThreadPool>(options.threads);
        pool = owned_pool.get();
    }
    std::optional<std::mt19937_64> shuffle_rng;
    if (options.member_shuffle_seed) {
        shuffle_rng.emplace(*options.member_shuffle_seed);
    }

    RunResult<T> result{Tensor<T>::matrix(input.original_length, config.vocab_size),
                        ExecutionTrace{ScheduleKind::Diagonal, {}, 0},
                        model::MemoryState<T>::fresh(config)};
    auto& memory = result.memory;

    // In-flight segments, newest at the front. Each sits at a distinct layer.
    std::deque<model::SegmentActivation<T>> in_flight;
    const auto run_start = Clock::now();

    for (std::size_t i = 0; i + 1 < S + L; ++i) {
        const auto t0 = Clock::now();
        if (i < S) {
            in_flight.push_front(model::embed<T>(weights, config, input.segments[i], i));
        }
        const std::size_t G = in_flight.size();
        std::vector<std::size_t> order(G);
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (shuffle_rng) {
            std::shuffle(order.begin(), order.end(), *shuffle_rng);
        }

        std::vector<model::GroupMember<T>> members(G);
        TraceEvent event{i, std::vector<sched::Node>(G), std::vector<std::size_t>(G, 0), 0};
        for (std::size_t g = 0; g < G; ++g) {
            auto& act = in_flight[order[g]];
            members[g] = {act.layer_cursor, &act};
            event.nodes[g] = {act.segment_index, act.layer_cursor};
        }

        auto for_members = [&](auto&& fn) {
            if (pool) {
                pool->parallel_for(G, [&](std::size_t g, std::size_t worker) { fn(g, worker); });
            } else {
                for (std::size_t g = 0; g < G; ++g) fn(g, 0);
            }
        };

        // Each member owns exactly one layer's memory slot within a step.
        for_members([&](std::size_t g, std::size_t) {
            const std::size_t l = members[g].layer;
            model::assoc_retrieve_inplace<T>(memory, l, weights.layer(l), config,
                                             members[g].activation->hidden.view());
        });
        model::grouped_layer_forward<T>(weights, config, members, pool);
        for_members([&](std::size_t g, std::size_t worker) {
            const std::size_t l = members[g].layer;
            model::assoc_update<T>(memory, l, weights.layer(l), config,
                                   members[g].activation->mem_part());
            event.workers[g] = worker;
        });

        if (!in_flight.empty() && in_flight.back().layer_cursor == L) {
            emit_logits(weights, in_flight.back(), input, result.logits);
            in_flight.pop_back();
        }
        event.duration_ns = elapsed_ns(t0);
        result.trace.events.push_back(std::move(event));
    }
    if (!in_flight.empty()) {
        throw SchedulingError("diagonal run finished with " + std::to_string(in_flight.size()) +
                              " segments still in flight");
    }
    result.trace.total_ns = elapsed_ns(run_start);
    return result;
}

template <Real T>
double relative_error(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) {
        throw DimensionError("relative_error: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + " elements");
    }
    double diff_sq = 0.0;
    double base_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        diff_sq += d * d;
        base_sq += static_cast<double>(b[i]) * static_cast<double>(b[i]);
    }
    if (diff_sq == 0.0) {
        return 0.0;
    }
    if (base_sq == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(diff_sq) / std::sqrt(base_sq);
}

template <Real T>
double relative_error(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape() != b.shape()) {
        throw DimensionError("relative_error: shapes " + shape_string(a.shape()) + " and " +
                             shape_string(b.shape()) + " differ");
    }
    return relative_error<T>(a.data(), b.data());
}

#define ARMT_INSTANTIATE_EXEC(T)                                                                   \
    template RunResult<T> run_sequential<T>(const model::GroupedWeights<T>&,                      \
                                            const model::ModelConfig&, std::span<const TokenId>);  \
    template RunResult<T> run_diagonal<T>(const model::GroupedWeights<T>&,                        \
                                          const model::ModelConfig&, std::span<const TokenId>,     \
                                          const RunOptions&);                                      \
    template double relative_error<T>(const Tensor<T>&, const Tensor<T>&);                         \
    template double relative_error<T>(std::span<const T>, std::span<const T>);

ARMT_INSTANTIATE_EXEC(float)
ARMT_INSTANTIATE_EXEC(double)

}  // namespace armt::exec
