// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "armt/sched/schedule.hpp"

namespace armt::exec {

enum class ScheduleKind { Sequential, Diagonal };

std::string to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(const std::string& name);

struct TraceEvent {
    std::size_t step = 0;
    std::vector<sched::Node> nodes;
    // Worker that performed each node's memory write; parallel to `nodes`.
    std::vector<std::size_t> workers;
    std::int64_t duration_ns = 0;
};

struct ExecutionTrace {
    ScheduleKind kind = ScheduleKind::Sequential;
    std::vector<TraceEvent> events;
    std::int64_t total_ns = 0;

    std::size_t steps() const { return events.size(); }

    /// The schedule the run actually followed, one group per event.
    sched::Schedule induced_schedule() const;

    /// {schedule_kind, steps: [{i, nodes: [[s, l], ...], workers, duration_ns}], total_ns}
    nlohmann::json to_json() const;
    static ExecutionTrace from_json(const nlohmann::json& json);
};

}  // namespace armt::exec
