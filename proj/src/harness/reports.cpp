// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/harness/reports.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "armt/errors.hpp"

namespace armt::harness {

std::string to_string(Precision p) { return p == Precision::F32 ? "f32" : "f64"; }

Precision parse_precision(const std::string& name) {
    if (name == "f32") return Precision::F32;
    if (name == "f64") return Precision::F64;
    throw InputError("unknown precision '" + name + "' (expected f32 or f64)");
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw InputError("unknown report format '" + name + "' (expected json or csv)");
}

nlohmann::json config_to_json(const model::ModelConfig& c) {
    return {{"n_layers", c.n_layers},         {"d_model", c.d_model},
            {"n_heads", c.n_heads},           {"d_ff", c.d_ff},
            {"vocab_size", c.vocab_size},     {"segment_size", c.segment_size},
            {"num_mem_tokens", c.num_mem_tokens}, {"d_mem", c.d_mem},
            {"dpfp_nu", c.dpfp_nu},           {"eps_assoc_f32", c.eps_assoc_f32},
            {"eps_assoc_f64", c.eps_assoc_f64}, {"eps_norm", c.eps_norm},
            {"rope_theta", c.rope_theta},     {"seed", c.seed}};
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_optional(const std::optional<double>& v) { return v ? csv_number(*v) : ""; }

}  // namespace

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"segments", r.segments},
                             {"rel_error_f32", optional_number(r.rel_error_f32)},
                             {"rel_error_f64", optional_number(r.rel_error_f64)},
                             {"pass", r.pass}});
    }
    return {{"report", "verify"},
            {"config", config_to_json(config)},
            {"tolerance", {{"f32", tolerance_f32}, {"f64", tolerance_f64}}},
            {"threads", threads},
            {"rows", std::move(rows_json)},
            {"pass", pass}};
}

std::string VerifyReport::to_csv() const {
    std::ostringstream os;
    os << "segments,rel_error_f32,rel_error_f64,pass\n";
    for (const auto& r : rows) {
        os << r.segments << ',' << csv_optional(r.rel_error_f32) << ','
           << csv_optional(r.rel_error_f64) << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

nlohmann::json BenchReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"mode", r.mode},
                             {"threads", r.threads},
                             {"seq_len", r.seq_len},
                             {"segments", r.segments},
                             {"wall_seconds", r.wall_seconds},
                             {"seconds_per_segment", r.seconds_per_segment},
                             {"speedup_vs_sequential", r.speedup_vs_sequential}});
    }
    return {{"report", "bench"},
            {"config", config_to_json(config)},
            {"environment",
             {{"precision", precision},
              {"workers", workers},
              {"repeat", repeat},
              {"kernel_isa", kernel_isa},
              {"timestamp", timestamp}}},
            {"rows", std::move(rows_json)}};
}

std::string BenchReport::to_csv() const {
    std::ostringstream os;
    os << "mode,threads,seq_len,segments,wall_seconds,seconds_per_segment,speedup_vs_sequential\n";
    for (const auto& r : rows) {
        os << r.mode << ',' << r.threads << ',' << r.seq_len << ',' << r.segments << ','
           << csv_number(r.wall_seconds) << ',' << csv_number(r.seconds_per_segment) << ','
           << csv_number(r.speedup_vs_sequential) << '\n';
    }
    return os.str();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace armt::harness
