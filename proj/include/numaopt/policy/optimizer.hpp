#pragma once

#include <numaopt/cluster/cluster.hpp>
#include <numaopt/metrics/features.hpp>
#include <numaopt/policy/config.hpp>
#include <numaopt/policy/history.hpp>

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace numaopt::policy {

struct OptimizerAction {
    enum class Kind { Bind, Unbind, NoOp };

    Kind kind = Kind::NoOp;
    std::string container_id;
    cluster::NodeId node = -1;  // Bind target
    std::string reason;

    static OptimizerAction bind(std::string id, cluster::NodeId node, std::string reason);
    static OptimizerAction unbind(std::string id, std::string reason);
    static OptimizerAction noop(std::string reason);
};

std::string to_string(OptimizerAction::Kind kind);

using ImprovementPredictor = std::function<double(const metrics::FeatureVector&)>;

/// One pass of the control loop for one server.
///
/// Phase 1 unbinds, one at a time, the triggering container with the least
/// CPU consumption (cores in use; ties by id) on the hottest triggering node,
/// recomputing node utilization after each. Phase 2 runs only when phase 1
/// did nothing: while every node is below rebind_cool, unbound containers
/// (in id order) whose predicted improvement exceeds the threshold are bound
/// to select_numa_node's choice. Containers without features are skipped.
/// Returns [NoOp] when nothing applies.
std::vector<OptimizerAction> optimizer_tick(
    const cluster::Server& server, std::span<const cluster::ContainerInstance> instances,
    const cluster::ServiceCatalog& catalog, const UtilizationHistory& history,
    const PolicyConfig& config, const ImprovementPredictor& predict,
    const std::map<std::string, metrics::FeatureVector>& features);

} // namespace numaopt::policy
