// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "armt/model/config.hpp"
#include "armt/model/embed.hpp"

namespace armt::exec {

using model::TokenId;

inline constexpr TokenId kPadToken = 0;

struct SegmentedInput {
    std::vector<std::vector<TokenId>> segments;  // each exactly segment_size long
    std::size_t original_length = 0;
    std::size_t pad_count = 0;  // padding appended to the last segment
};

/// Splits into ceil(n / segment_size) segments, right-padding the last with
/// kPadToken. Throws InputError on empty input.
SegmentedInput segment_input(std::span<const TokenId> tokens, const model::ModelConfig& config);

}  // namespace armt::exec
