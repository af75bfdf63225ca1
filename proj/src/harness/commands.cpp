// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/harness/commands.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <thread>

#include "armt/exec/executor.hpp"
#include "armt/tensor/kernels.hpp"

namespace armt::harness {

std::vector<model::TokenId> random_tokens(std::size_t count, std::size_t vocab, std::uint64_t seed) {
    if (vocab == 0) {
        throw InputError("vocabulary is empty");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> dist(0, vocab - 1);
    std::vector<model::TokenId> tokens(count);
    for (auto& t : tokens) {
        t = static_cast<model::TokenId>(dist(rng));
    }
    return tokens;
}

namespace {

template <Real T>
double compare_executors(const model::Container& c, std::span<const model::TokenId> tokens,
                         std::size_t threads) {
    const auto weights = model::weights_as<T>(c);
    const auto base = exec::run_sequential<T>(weights, c.config, tokens);
    const auto diag = exec::run_diagonal<T>(weights, c.config, tokens, {.threads = threads});
    return exec::relative_error<T>(diag.logits, base.logits);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename Fn>
double time_median(std::size_t repeat, Fn&& fn) {
    fn();  // warmup, discarded
    std::vector<double> samples;
    for (std::size_t r = 0; r < std::max<std::size_t>(repeat, 1); ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        samples.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return median(std::move(samples));
}

template <Real T>
void bench_cells(const model::Container& c, const BenchOptions& options, BenchReport& report) {
    const auto weights = model::weights_as<T>(c);
    const auto& cfg = c.config;
    auto wants = [&](const std::string& mode) {
        return std::find(options.modes.begin(), options.modes.end(), mode) != options.modes.end();
    };

    for (std::size_t seq_len : options.seq_lens) {
        const auto tokens = random_tokens(seq_len, cfg.vocab_size, options.token_seed);
        const std::size_t segments = (seq_len + cfg.segment_size - 1) / cfg.segment_size;

        const double seq_wall = time_median(options.repeat, [&] {
            (void)exec::run_sequential<T>(weights, cfg, tokens);
        });
        if (wants("sequential")) {
            report.rows.push_back({"sequential", 1, seq_len, segments, seq_wall,
                                   seq_wall / static_cast<double>(segments), 1.0});
        }

        for (std::size_t threads : options.threads) {
            if (wants("diagonal")) {
                ThreadPool pool(threads);
                const double wall = time_median(options.repeat, [&] {
                    (void)exec::run_diagonal<T>(weights, cfg, tokens, {.pool = &pool});
                });
                report.rows.push_back({"diagonal", threads, seq_len, segments, wall,
                                       wall / static_cast<double>(segments), seq_wall / wall});
            }
            if (wants("minibatch")) {
                // `threads` independent sequences, each run sequentially on its own worker.
                std::vector<std::vector<model::TokenId>> streams;
                for (std::size_t b = 0; b < threads; ++b) {
                    streams.push_back(random_tokens(seq_len, cfg.vocab_size, options.token_seed + b));
                }
                ThreadPool pool(threads);
                const double wall = time_median(options.repeat, [&] {
                    pool.parallel_for(threads, [&](std::size_t b, std::size_t) {
                        (void)exec::run_sequential<T>(weights, cfg, streams[b]);
                    });
                });
                report.rows.push_back({"minibatch", threads, seq_len, segments, wall,
                                       wall / static_cast<double>(segments * threads),
                                       seq_wall / wall});
            }
        }
    }
}

}  // namespace

VerifyReport run_verify(const model::Container& c, const VerifyOptions& options) {
    if (options.segments.empty()) {
        throw InputError("verify needs at least one segment count");
    }
    VerifyReport report;
    report.config = c.config;
    report.threads = options.threads;
    const bool f32 = std::count(options.precisions.begin(), options.precisions.end(), Precision::F32);
    const bool f64 = std::count(options.precisions.begin(), options.precisions.end(), Precision::F64);
    for (std::size_t segments : options.segments) {
        if (segments == 0) {
            throw InputError("segment count must be >= 1");
        }
        const auto tokens = random_tokens(segments * c.config.segment_size, c.config.vocab_size,
                                          options.token_seed + segments);
        VerifyRow row;
        row.segments = segments;
        if (f32) {
            row.rel_error_f32 = compare_executors<float>(c, tokens, options.threads);
            row.pass = row.pass && *row.rel_error_f32 <= report.tolerance_f32;
        }
        if (f64) {
            row.rel_error_f64 = compare_executors<double>(c, tokens, options.threads);
            row.pass = row.pass && *row.rel_error_f64 <= report.tolerance_f64;
        }
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

BenchReport run_bench(const model::Container& c, const BenchOptions& options) {
    if (options.seq_lens.empty()) {
        throw InputError("bench needs at least one --seq-len");
    }
    for (const auto& mode : options.modes) {
        if (mode != "sequential" && mode != "diagonal" && mode != "minibatch") {
            throw InputError("unknown bench mode '" + mode + "'");
        }
    }
    for (std::size_t t : options.threads) {
        if (t == 0) throw InputError("thread counts must be >= 1");
    }
    for (std::size_t n : options.seq_lens) {
        if (n == 0) throw InputError("sequence lengths must be >= 1");
    }
    BenchReport report;
    report.config = c.config;
    report.precision = to_string(options.precision);
    report.workers = std::max(1u, std::thread::hardware_concurrency());
    report.repeat = options.repeat;
    report.kernel_isa = std::string(kernels::isa_name(kernels::active_isa()));
    report.timestamp = utc_timestamp();
    if (options.precision == Precision::F32) {
        bench_cells<float>(c, options, report);
    } else {
        bench_cells<double>(c, options, report);
    }
    return report;
}

exec::ExecutionTrace run_trace(const model::Container& c, std::size_t seq_len,
                               exec::ScheduleKind kind, std::size_t threads,
                               std::uint64_t token_seed) {
    const auto tokens = random_tokens(seq_len, c.config.vocab_size, token_seed);
    const auto weights = model::weights_as<float>(c);
    if (kind == exec::ScheduleKind::Sequential) {
        return exec::run_sequential<float>(weights, c.config, tokens).trace;
    }
    return exec::run_diagonal<float>(weights, c.config, tokens, {.threads = threads}).trace;
}

}  // namespace armt::harness
