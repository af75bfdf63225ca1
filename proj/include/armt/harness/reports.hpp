// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "armt/model/config.hpp"

namespace armt::harness {

enum class Precision { F32, F64 };
enum class ReportFormat { Json, Csv };

std::string to_string(Precision p);
Precision parse_precision(const std::string& name);
ReportFormat parse_report_format(const std::string& name);

inline constexpr double kVerifyToleranceF32 = 1e-3;
inline constexpr double kVerifyToleranceF64 = 1e-12;

nlohmann::json config_to_json(const model::ModelConfig& config);

struct VerifyRow {
    std::size_t segments = 0;
    std::optional<double> rel_error_f32;
    std::optional<double> rel_error_f64;
    bool pass = true;
};

struct VerifyReport {
    model::ModelConfig config;
    std::vector<VerifyRow> rows;
    double tolerance_f32 = kVerifyToleranceF32;
    double tolerance_f64 = kVerifyToleranceF64;
    std::size_t threads = 1;
    bool pass = true;

    nlohmann::json to_json() const;
    /// Header: segments,rel_error_f32,rel_error_f64,pass
    std::string to_csv() const;
};

struct BenchRow {
    std::string mode;  // sequential | diagonal | minibatch
    std::size_t threads = 1;
    std::size_t seq_len = 0;
    std::size_t segments = 0;
    double wall_seconds = 0;
    double seconds_per_segment = 0;
    double speedup_vs_sequential = 0;
};

struct BenchReport {
    model::ModelConfig config;
    std::vector<BenchRow> rows;
    std::string precision;
    std::size_t workers = 1;  // host hardware concurrency
    std::size_t repeat = 1;
    std::string kernel_isa;
    std::string timestamp;  // UTC, ISO 8601

    nlohmann::json to_json() const;
    /// Header: mode,threads,seq_len,segments,wall_seconds,seconds_per_segment,speedup_vs_sequential
    std::string to_csv() const;
};

std::string utc_timestamp();

}  // namespace armt::harness
