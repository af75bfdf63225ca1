// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "armt/model/config.hpp"
#include "armt/tensor/tensor.hpp"

namespace armt::model {

/// Hidden states of one segment on its way through the layer stack. Rows are
/// the segment's tokens followed by its memory tokens.
template <Real T>
struct SegmentActivation {
    Tensor<T> hidden;  // (segment_size + num_mem_tokens) x d_model
    std::size_t segment_rows = 0;
    std::size_t segment_index = 0;
    std::size_t layer_cursor = 0;

    static SegmentActivation zeros(const ModelConfig& c, std::size_t segment_index = 0) {
        return {Tensor<T>::matrix(c.positions(), c.d_model), c.segment_size, segment_index, 0};
    }

    std::size_t positions() const { return hidden.rows(); }
    std::size_t mem_rows() const { return positions() - segment_rows; }

    ConstMatrixView<T> tokens_part() const {
        return {hidden.data().data(), segment_rows, hidden.cols()};
    }
    ConstMatrixView<T> mem_part() const {
        return {hidden.data().data() + segment_rows * hidden.cols(), mem_rows(), hidden.cols()};
    }
    MatrixView<T> mem_part() {
        return {hidden.data().data() + segment_rows * hidden.cols(), mem_rows(), hidden.cols()};
    }
};

}  // namespace armt::model
