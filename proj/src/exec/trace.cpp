// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/exec/trace.hpp"

#include "armt/errors.hpp"

namespace armt::exec {

std::string to_string(ScheduleKind kind) {
    return kind == ScheduleKind::Sequential ? "sequential" : "diagonal";
}

ScheduleKind parse_schedule_kind(const std::string& name) {
    if (name == "sequential") return ScheduleKind::Sequential;
    if (name == "diagonal") return ScheduleKind::Diagonal;
    throw InputError("unknown schedule kind '" + name + "' (expected sequential or diagonal)");
}

sched::Schedule ExecutionTrace::induced_schedule() const {
    sched::Schedule s;
    s.groups.reserve(events.size());
    for (const auto& e : events) {
        s.groups.push_back(e.nodes);
    }
    return s;
}

nlohmann::json ExecutionTrace::to_json() const {
    nlohmann::json steps = nlohmann::json::array();
    const auto groups = sched::schedule_to_json(induced_schedule());
    for (std::size_t i = 0; i < events.size(); ++i) {
        steps.push_back({{"i", events[i].step},
                         {"nodes", groups[i]},
                         {"workers", events[i].workers},
                         {"duration_ns", events[i].duration_ns}});
    }
    return {{"schedule_kind", to_string(kind)}, {"steps", std::move(steps)}, {"total_ns", total_ns}};
}

ExecutionTrace ExecutionTrace::from_json(const nlohmann::json& json) {
    try {
        ExecutionTrace t;
        t.kind = parse_schedule_kind(json.at("schedule_kind").get<std::string>());
        t.total_ns = json.at("total_ns").get<std::int64_t>();
        for (const auto& step : json.at("steps")) {
            TraceEvent e;
            e.step = step.at("i").get<std::size_t>();
            e.duration_ns = step.at("duration_ns").get<std::int64_t>();
            e.nodes = sched::schedule_from_json(nlohmann::json::array({step.at("nodes")})).groups.at(0);
            if (step.contains("workers")) {
                e.workers = step.at("workers").get<std::vector<std::size_t>>();
            }
            t.events.push_back(std::move(e));
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed trace JSON: ") + e.what());
    }
}

}  // namespace armt::exec
