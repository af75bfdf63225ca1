// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/sched/schedule.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "armt/errors.hpp"

namespace armt::sched {

std::string to_string(const Node& node) {
    return "(" + std::to_string(node.segment) + "," + std::to_string(node.layer) + ")";
}

std::size_t Schedule::node_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
}

std::size_t Schedule::max_group_size() const {
    std::size_t n = 0;
    for (const auto& g : groups) n = std::max(n, g.size());
    return n;
}

namespace {

void require_grid(std::size_t segments, std::size_t layers) {
    if (segments == 0 || layers == 0) {
        throw InputError("schedule needs at least one segment and one layer (got S=" +
                         std::to_string(segments) + ", L=" + std::to_string(layers) + ")");
    }
}

}  // namespace

DiagonalSchedule build_diagonal_schedule(std::size_t segments, std::size_t layers) {
    require_grid(segments, layers);
    DiagonalSchedule schedule;
    schedule.groups.resize(segments + layers - 1);
    for (std::size_t i = 0; i < schedule.groups.size(); ++i) {
        // s ranges over max(0, i - L + 1) ..= min(i, S - 1), newest first.
        const std::size_t s_hi = std::min(i, segments - 1);
        const std::size_t s_lo = i >= layers ? i - layers + 1 : 0;
        for (std::size_t s = s_hi + 1; s-- > s_lo;) {
            schedule.groups[i].push_back({s, i - s});
        }
    }
    return schedule;
}

Schedule build_sequential_schedule(std::size_t segments, std::size_t layers) {
    require_grid(segments, layers);
    Schedule schedule;
    schedule.groups.reserve(segments * layers);
    for (std::size_t s = 0; s < segments; ++s) {
        for (std::size_t l = 0; l < layers; ++l) {
            schedule.groups.push_back({{s, l}});
        }
    }
    return schedule;
}

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::ostringstream os;
    os << violations.size() << " violation(s)";
    for (std::size_t i = 0; i < violations.size() && i < 5; ++i) {
        os << "; " << violations[i].message;
    }
    return os.str();
}

ValidationReport validate_schedule(const Schedule& schedule, std::size_t segments,
                                   std::size_t layers) {
    ValidationReport report;
    constexpr std::size_t kUnplaced = static_cast<std::size_t>(-1);
    std::vector<std::size_t> group_of(segments * layers, kUnplaced);

    for (std::size_t g = 0; g < schedule.groups.size(); ++g) {
        for (const Node& n : schedule.groups[g]) {
            if (n.segment >= segments || n.layer >= layers) {
                report.violations.push_back({Violation::Kind::OutOfRange, n, std::nullopt,
                                             "node " + to_string(n) + " in group " +
                                                 std::to_string(g) + " is outside the grid"});
                continue;
            }
            auto& slot = group_of[n.segment * layers + n.layer];
            if (slot != kUnplaced) {
                report.violations.push_back({Violation::Kind::Duplicate, n, std::nullopt,
                                             "node " + to_string(n) + " appears in groups " +
                                                 std::to_string(slot) + " and " +
                                                 std::to_string(g)});
                continue;
            }
            slot = g;
        }
    }
    for (std::size_t s = 0; s < segments; ++s) {
        for (std::size_t l = 0; l < layers; ++l) {
            const Node n{s, l};
            const std::size_t g = group_of[s * layers + l];
            if (g == kUnplaced) {
                report.violations.push_back({Violation::Kind::Missing, n, std::nullopt,
                                             "node " + to_string(n) + " is never scheduled"});
                continue;
            }
            auto check_edge = [&](Node pred) {
                const std::size_t pg = group_of[pred.segment * layers + pred.layer];
                if (pg == kUnplaced) return;  // reported as Missing
                if (pg >= g) {
                    report.violations.push_back(
                        {Violation::Kind::Dependency, n, pred,
                         "edge " + to_string(pred) + " -> " + to_string(n) + " broken: group " +
                             std::to_string(pg) + " is not before group " + std::to_string(g)});
                }
            };
            if (s > 0) check_edge({s - 1, l});
            if (l > 0) check_edge({s, l - 1});
        }
    }
    return report;
}

namespace {

struct GridDag {
    std::size_t layers;
    std::vector<std::vector<std::size_t>> successors;
    std::vector<std::size_t> in_degree;
};

GridDag build_dag(std::size_t segments, std::size_t layers) {
    GridDag dag{layers, std::vector<std::vector<std::size_t>>(segments * layers),
                std::vector<std::size_t>(segments * layers, 0)};
    auto id = [layers](std::size_t s, std::size_t l) { return s * layers + l; };
    for (std::size_t s = 0; s < segments; ++s) {
        for (std::size_t l = 0; l < layers; ++l) {
            if (s + 1 < segments) {
                dag.successors[id(s, l)].push_back(id(s + 1, l));
                ++dag.in_degree[id(s + 1, l)];
            }
            if (l + 1 < layers) {
                dag.successors[id(s, l)].push_back(id(s, l + 1));
                ++dag.in_degree[id(s, l + 1)];
            }
        }
    }
    return dag;
}

/// Vertex count of the longest path ending at each node.
std::vector<std::size_t> longest_chain(std::size_t segments, std::size_t layers) {
    require_grid(segments, layers);
    if (segments * layers > kOracleNodeLimit) {
        throw InputError("oracle limited to " + std::to_string(kOracleNodeLimit) + " nodes (S*L=" +
                         std::to_string(segments * layers) + ")");
    }
    GridDag dag = build_dag(segments, layers);
    std::vector<std::size_t> chain(dag.in_degree.size(), 1);
    std::deque<std::size_t> ready;
    for (std::size_t v = 0; v < dag.in_degree.size(); ++v) {
        if (dag.in_degree[v] == 0) ready.push_back(v);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::size_t v = ready.front();
        ready.pop_front();
        ++visited;
        for (std::size_t w : dag.successors[v]) {
            chain[w] = std::max(chain[w], chain[v] + 1);
            if (--dag.in_degree[w] == 0) ready.push_back(w);
        }
    }
    if (visited != chain.size()) {
        throw SchedulingError("dependency graph has a cycle");
    }
    return chain;
}

}  // namespace

std::size_t min_groups_oracle(std::size_t segments, std::size_t layers) {
    const auto chain = longest_chain(segments, layers);
    return *std::max_element(chain.begin(), chain.end());
}

std::vector<std::size_t> earliest_group_oracle(std::size_t segments, std::size_t layers) {
    auto chain = longest_chain(segments, layers);
    for (auto& c : chain) --c;  // chain of k vertices ends in group k-1
    return chain;
}

nlohmann::json schedule_to_json(const Schedule& schedule) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : schedule.groups) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const Node& n : g) nodes.push_back({n.segment, n.layer});
        groups.push_back(std::move(nodes));
    }
    return groups;
}

Schedule schedule_from_json(const nlohmann::json& json) {
    if (!json.is_array()) {
        throw InputError("schedule JSON must be an array of groups");
    }
    Schedule schedule;
    for (const auto& g : json) {
        if (!g.is_array()) throw InputError("schedule group must be an array of [segment, layer]");
        std::vector<Node> nodes;
        for (const auto& n : g) {
            if (!n.is_array() || n.size() != 2 || !n[0].is_number_unsigned() ||
                !n[1].is_number_unsigned()) {
                throw InputError("schedule node must be [segment, layer] with non-negative ints");
            }
            nodes.push_back({n[0].get<std::size_t>(), n[1].get<std::size_t>()});
        }
        schedule.groups.push_back(std::move(nodes));
    }
    return schedule;
}

}  // namespace armt::sched
