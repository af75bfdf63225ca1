// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// The (segment, layer) dependency grid. Node (s, l) needs (s, l-1), the same
// segment one layer down, and (s-1, l), the same layer's memory after the
// previous segment. Nodes on one anti-diagonal s + l = i are independent.

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace armt::sched {

struct Node {
    std::size_t segment = 0;
    std::size_t layer = 0;

    auto operator<=>(const Node&) const = default;
};

std::string to_string(const Node& node);

/// Ordered groups; every node in a group may run concurrently, in any order.
struct Schedule {
    std::vector<std::vector<Node>> groups;

    std::size_t step_count() const { return groups.size(); }
    std::size_t node_count() const;
    std::size_t max_group_size() const;
};

using DiagonalSchedule = Schedule;

/// Group i holds every node with segment + layer == i, ordered by descending
/// segment (newest segment first). Throws InputError for S == 0 or L == 0.
DiagonalSchedule build_diagonal_schedule(std::size_t segments, std::size_t layers);

/// One node per group: segments outermost, layers innermost.
Schedule build_sequential_schedule(std::size_t segments, std::size_t layers);

struct Violation {
    enum class Kind { OutOfRange, Duplicate, Missing, Dependency };
    Kind kind;
    Node node;
    std::optional<Node> predecessor;  // set for Dependency
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

/// Checks exact coverage of the S x L grid and that both predecessors of every
/// node sit in strictly earlier groups.
ValidationReport validate_schedule(const Schedule& schedule, std::size_t segments,
                                   std::size_t layers);

inline constexpr std::size_t kOracleNodeLimit = 10'000;

/// Longest path (in vertices) through the explicit dependency DAG, found by
/// dynamic programming over a Kahn topological order. Test oracle; throws
/// InputError when S * L exceeds kOracleNodeLimit.
std::size_t min_groups_oracle(std::size_t segments, std::size_t layers);

/// Per-node length of the longest predecessor chain ending at that node,
/// indexed [segment * layers + layer], from the same DAG walk.
std::vector<std::size_t> earliest_group_oracle(std::size_t segments, std::size_t layers);

/// [[ [s, l], ... ], ...]
nlohmann::json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& json);

}  // namespace armt::sched
