// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/exec/segment.hpp"

#include <algorithm>

#include "armt/errors.hpp"

namespace armt::exec {

SegmentedInput segment_input(std::span<const TokenId> tokens, const model::ModelConfig& config) {
    if (tokens.empty()) {
        throw InputError("cannot segment an empty token sequence");
    }
    const std::size_t seg = config.segment_size;
    SegmentedInput out;
    out.original_length = tokens.size();
    const std::size_t count = (tokens.size() + seg - 1) / seg;
    out.segments.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t begin = s * seg;
        const std::size_t end = std::min(begin + seg, tokens.size());
        std::vector<TokenId> segment(tokens.begin() + begin, tokens.begin() + end);
        segment.resize(seg, kPadToken);
        out.segments.push_back(std::move(segment));
    }
    out.pad_count = count * seg - tokens.size();
    return out;
}

}  // namespace armt::exec
