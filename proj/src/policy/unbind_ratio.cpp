#include <numaopt/policy/unbind_ratio.hpp>

#include <numaopt/common/csv.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace numaopt::policy {

void write_actions_csv(std::ostream& out, std::span<const ActionRecord> log) {
    out << "timestamp,server_id,container_id,action,reason\n";
    for (const auto& r : log) {
        std::string action = to_string(r.action.kind);
        if (r.action.kind == OptimizerAction::Kind::Bind) {
            action += ":" + std::to_string(r.action.node);
        }
        std::string reason = r.action.reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        out << csv::format_double(r.timestamp) << ',' << r.server_id << ','
            << r.action.container_id << ',' << action << ',' << reason << '\n';
    }
}

double unbind_ratio(std::span<const ActionRecord> log, double total_instance_time,
                    double run_end) {
    if (!(total_instance_time > 0.0)) {
        throw std::invalid_argument("unbind_ratio: total instance time must be > 0");
    }
    std::map<std::string, double> unbound_since;
    double unbound = 0.0;
    for (const auto& r : log) {
        const auto& id = r.action.container_id;
        if (r.action.kind == OptimizerAction::Kind::Unbind) {
            unbound_since.try_emplace(id, r.timestamp);
        } else if (r.action.kind == OptimizerAction::Kind::Bind) {
            if (auto it = unbound_since.find(id); it != unbound_since.end()) {
                unbound += std::max(0.0, r.timestamp - it->second);
                unbound_since.erase(it);
            }
        }
    }
    for (const auto& [id, since] : unbound_since) {
        unbound += std::max(0.0, run_end - since);
    }
    return std::clamp(unbound / total_instance_time, 0.0, 1.0);
}

} // namespace numaopt::policy
