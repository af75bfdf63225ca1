// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "armt/tensor/tensor.hpp"

namespace armt::model {

/// Architectural hyperparameters of an associative recurrent memory transformer.
struct ModelConfig {
    std::size_t n_layers = 8;
    std::size_t d_model = 128;
    std::size_t n_heads = 4;
    std::size_t d_ff = 512;
    std::size_t vocab_size = 256;
    std::size_t segment_size = 64;
    std::size_t num_mem_tokens = 8;
    std::size_t d_mem = 16;
    std::size_t dpfp_nu = 3;
    // Associative-memory denominator guard, one per precision.
    double eps_assoc_f32 = 1e-6;
    double eps_assoc_f64 = 1e-12;
    double eps_norm = 1e-5;
    double rope_theta = 10000.0;
    std::uint64_t seed = 0;

    /// Throws InputError naming the first violated constraint.
    void validate() const;

    std::size_t head_dim() const { return d_model / n_heads; }
    /// Positions per segment: segment tokens followed by memory tokens.
    std::size_t positions() const { return segment_size + num_mem_tokens; }
    /// Width of the feature map output and of the associative matrix.
    std::size_t feature_dim() const { return 2 * dpfp_nu * d_mem; }

    template <Real T>
    T eps_assoc() const {
        return static_cast<T>(std::is_same_v<T, float> ? eps_assoc_f32 : eps_assoc_f64);
    }

    bool operator==(const ModelConfig&) const = default;
};

std::string describe(const ModelConfig& config);

}  // namespace armt::model
