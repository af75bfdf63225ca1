// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// armt_cli: weight generation, executor verification, benchmarking and trace
// export. Exit codes: 0 ok, 1 tolerance breach, 2 input error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "armt/errors.hpp"
#include "armt/harness/commands.hpp"
#include "armt/model/container.hpp"
#include "armt/model/weights.hpp"
#include "armt/sched/schedule.hpp"
#include "armt/tensor/thread_pool.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitInput = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) {
        throw armt::InputError("cannot open '" + out_path + "' for writing");
    }
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Associative recurrent memory transformer: sequential vs diagonal execution"};
    app.require_subcommand(1);

    // init-weights
    armt::model::ModelConfig cfg;
    std::string weights_out;
    std::string weights_dtype = "f64";
    auto* init = app.add_subcommand("init-weights", "Generate a seeded weight container");
    init->add_option("--seed", cfg.seed, "Weight-init seed")->capture_default_str();
    init->add_option("--layers", cfg.n_layers, "Number of layers")->capture_default_str();
    init->add_option("--d-model", cfg.d_model, "Model width")->capture_default_str();
    init->add_option("--heads", cfg.n_heads, "Attention heads")->capture_default_str();
    init->add_option("--d-ff", cfg.d_ff, "MLP hidden width")->capture_default_str();
    init->add_option("--vocab", cfg.vocab_size, "Vocabulary size")->capture_default_str();
    init->add_option("--segment-size", cfg.segment_size, "Tokens per segment")->capture_default_str();
    init->add_option("--mem-tokens", cfg.num_mem_tokens, "Memory tokens per segment")
        ->capture_default_str();
    init->add_option("--d-mem", cfg.d_mem, "Associative key width")->capture_default_str();
    init->add_option("--dpfp-nu", cfg.dpfp_nu, "Feature-map order")->capture_default_str();
    init->add_option("--dtype", weights_dtype, "Stored precision")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();
    init->add_option("--out", weights_out, "Output file")->required();

    // verify
    std::string weights_in;
    std::vector<std::size_t> verify_segments{1, 2, 4, 8, 16, 32};
    std::vector<std::string> verify_precisions{"f32", "f64"};
    std::string report_format = "json";
    std::string report_out;
    std::uint64_t token_seed = 0;
    std::size_t verify_threads = armt::threads_from_env(1);
    auto* verify = app.add_subcommand("verify", "Compare diagonal and sequential logits");
    verify->add_option("--weights", weights_in, "Weight container")->required();
    verify->add_option("--segments", verify_segments, "Segment counts")->delimiter(',');
    verify->add_option("--precision", verify_precisions, "f32 and/or f64")
        ->delimiter(',')
        ->check(CLI::IsMember({"f32", "f64"}));
    verify->add_option("--report", report_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--out", report_out, "Report file (default stdout)");
    verify->add_option("--token-seed", token_seed, "Seed for random token inputs");
    verify->add_option("--threads", verify_threads, "Diagonal executor workers");

    // bench
    std::vector<std::size_t> bench_seq_lens;
    std::vector<std::string> bench_modes{"sequential", "diagonal", "minibatch"};
    std::vector<std::size_t> bench_threads{armt::threads_from_env(1)};
    std::size_t bench_repeat = 3;
    std::string bench_precision = "f32";
    auto* bench = app.add_subcommand("bench", "Time sequential, diagonal and minibatch execution");
    bench->add_option("--weights", weights_in, "Weight container")->required();
    bench->add_option("--seq-len", bench_seq_lens, "Sequence lengths")->delimiter(',')->required();
    bench->add_option("--modes", bench_modes, "sequential, diagonal, minibatch")
        ->delimiter(',')
        ->check(CLI::IsMember({"sequential", "diagonal", "minibatch"}));
    bench->add_option("--threads", bench_threads, "Worker counts")->delimiter(',');
    bench->add_option("--repeat", bench_repeat, "Timed repeats per cell (median reported)");
    bench->add_option("--precision", bench_precision, "f32 or f64")->check(CLI::IsMember({"f32", "f64"}));
    bench->add_option("--report", report_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    bench->add_option("--out", report_out, "Report file (default stdout)");
    bench->add_option("--token-seed", token_seed, "Seed for random token inputs");

    // trace
    std::size_t trace_seq_len = 0;
    std::string trace_schedule = "diagonal";
    std::string trace_out;
    std::size_t trace_threads = armt::threads_from_env(1);
    auto* trace = app.add_subcommand("trace", "Run once and write the execution trace as JSON");
    trace->add_option("--weights", weights_in, "Weight container")->required();
    trace->add_option("--seq-len", trace_seq_len, "Sequence length in tokens")->required();
    trace->add_option("--schedule", trace_schedule, "sequential or diagonal")
        ->check(CLI::IsMember({"sequential", "diagonal"}));
    trace->add_option("--out", trace_out, "Trace file")->required();
    trace->add_option("--threads", trace_threads, "Diagonal executor workers");
    trace->add_option("--token-seed", token_seed, "Seed for random token inputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*init) {
            cfg.validate();
            const auto weights = armt::model::init_weights(cfg);
            if (weights_dtype == "f32") {
                armt::model::save_container(weights_out, cfg,
                                            armt::model::cast_weights<float>(weights));
            } else {
                armt::model::save_container(weights_out, cfg, weights);
            }
            std::cerr << "wrote " << weights_out << " (" << armt::model::describe(cfg) << ")\n";
            return kExitOk;
        }

        const auto container = armt::model::load_container(weights_in);

        if (*verify) {
            armt::harness::VerifyOptions opts;
            opts.segments = verify_segments;
            opts.precisions.clear();
            for (const auto& p : verify_precisions) {
                opts.precisions.push_back(armt::harness::parse_precision(p));
            }
            opts.token_seed = token_seed;
            opts.threads = verify_threads;
            const auto report = armt::harness::run_verify(container, opts);
            emit(report_format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n",
                 report_out);
            if (!report.pass) {
                for (const auto& row : report.rows) {
                    if (!row.pass) {
                        std::cerr << "tolerance exceeded at segments=" << row.segments
                                  << " rel_error_f32="
                                  << (row.rel_error_f32 ? std::to_string(*row.rel_error_f32) : "-")
                                  << " rel_error_f64="
                                  << (row.rel_error_f64 ? std::to_string(*row.rel_error_f64) : "-")
                                  << "\n";
                    }
                }
                return kExitTolerance;
            }
            return kExitOk;
        }

        if (*bench) {
            armt::harness::BenchOptions opts;
            opts.seq_lens = bench_seq_lens;
            opts.modes = bench_modes;
            opts.threads = bench_threads;
            opts.repeat = bench_repeat;
            opts.precision = armt::harness::parse_precision(bench_precision);
            opts.token_seed = token_seed;
            const auto report = armt::harness::run_bench(container, opts);
            emit(report_format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n",
                 report_out);
            return kExitOk;
        }

        if (*trace) {
            const auto kind = armt::exec::parse_schedule_kind(trace_schedule);
            const auto t =
                armt::harness::run_trace(container, trace_seq_len, kind, trace_threads, token_seed);
            const std::size_t segments =
                (trace_seq_len + container.config.segment_size - 1) / container.config.segment_size;
            const auto check = armt::sched::validate_schedule(t.induced_schedule(), segments,
                                                              container.config.n_layers);
            if (!check.ok()) {
                std::cerr << "trace violates the dependency graph: " << check.summary() << "\n";
                return kExitTolerance;
            }
            emit(t.to_json().dump(2) + "\n", trace_out);
            return kExitOk;
        }
    } catch (const armt::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const armt::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
