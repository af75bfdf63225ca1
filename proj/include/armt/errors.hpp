// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace armt {

/// Shape or size disagreement between operands.
class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: configuration values, token ids, files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A node was executed out of dependency order, or a group is malformed.
class SchedulingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace armt
