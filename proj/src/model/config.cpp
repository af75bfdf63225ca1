// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/model/config.hpp"

#include <cmath>
#include <sstream>

#include "armt/errors.hpp"

namespace armt::model {

void ModelConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw InputError("invalid model config: " + what);
    };
    require(n_layers >= 1, "n_layers must be >= 1");
    require(d_model >= 1, "d_model must be >= 1");
    require(n_heads >= 1, "n_heads must be >= 1");
    require(d_model % n_heads == 0, "d_model (" + std::to_string(d_model) +
                                        ") must be divisible by n_heads (" +
                                        std::to_string(n_heads) + ")");
    require(head_dim() % 2 == 0, "head dimension must be even for rotary encoding");
    require(d_ff >= 1, "d_ff must be >= 1");
    require(vocab_size >= 1, "vocab_size must be >= 1");
    require(segment_size >= 1, "segment_size must be >= 1");
    require(num_mem_tokens >= 1, "num_mem_tokens must be >= 1");
    require(d_mem >= 1, "d_mem must be >= 1");
    require(dpfp_nu >= 1, "dpfp_nu must be >= 1");
    require(eps_assoc_f32 > 0 && eps_assoc_f64 > 0, "eps_assoc must be positive");
    require(eps_norm > 0, "eps_norm must be positive");
    require(std::isfinite(rope_theta) && rope_theta > 0, "rope_theta must be positive");
}

std::string describe(const ModelConfig& c) {
    std::ostringstream os;
    os << "L=" << c.n_layers << " d_model=" << c.d_model << " heads=" << c.n_heads
       << " d_ff=" << c.d_ff << " vocab=" << c.vocab_size << " segment=" << c.segment_size
       << " mem_tokens=" << c.num_mem_tokens << " d_mem=" << c.d_mem << " nu=" << c.dpfp_nu;
    return os.str();
}

}  // namespace armt::model
