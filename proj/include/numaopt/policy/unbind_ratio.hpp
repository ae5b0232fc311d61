#pragma once

#include <numaopt/policy/optimizer.hpp>

#include <ostream>
#include <span>
#include <string>

namespace numaopt::policy {

struct ActionRecord {
    double timestamp = 0.0;
    std::string server_id;
    OptimizerAction action;
};

/// Columns: timestamp,server_id,container_id,action,reason. Action is
/// "bind:<node>", "unbind" or "noop".
void write_actions_csv(std::ostream& out, std::span<const ActionRecord> log);

/// Instance-time spent unbound after an Unbind (until a later Bind of the same
/// container, or `run_end`), over `total_instance_time`. Throws
/// std::invalid_argument when the denominator is not positive.
double unbind_ratio(std::span<const ActionRecord> log, double total_instance_time,
                    double run_end);

} // namespace numaopt::policy
