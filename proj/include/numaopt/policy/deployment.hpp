#pragma once

#include <numaopt/cluster/cluster.hpp>
#include <numaopt/policy/config.hpp>

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace numaopt::policy {

struct DeploymentPlan {
    std::vector<std::pair<std::string, double>> services;  // (service_id, predicted improvement)
    bool applied = false;
    std::map<std::string, cluster::BindState> prior_states;

    bool contains(const std::string& service_id) const;
};

/// Descending by predicted improvement (ties by service id), keeping only
/// services strictly above min_predicted_improvement, at most k.
DeploymentPlan select_top_services(const std::map<std::string, double>& predictions,
                                   std::size_t k, const PolicyConfig& config);

/// Picks the bind node for a container, or nullopt to leave it alone.
using NodeChooser = std::function<std::optional<cluster::NodeId>(
    const cluster::ContainerInstance&, std::span<const cluster::ContainerInstance>)>;

/// Binds every container of a planned service, recording prior bind states
/// first. Returns the ids whose state changed.
std::vector<std::string> apply_plan(DeploymentPlan& plan,
                                    std::vector<cluster::ContainerInstance>& containers,
                                    const NodeChooser& choose);

struct RollbackReport {
    std::vector<std::string> restored;
    std::vector<std::string> exited;  // recorded but no longer present
    std::string warning;
};

/// Restores every surviving container to its recorded state. Idempotent;
/// rolling back an unapplied plan changes nothing and sets a warning.
RollbackReport rollback(const DeploymentPlan& plan,
                        std::vector<cluster::ContainerInstance>& containers);

nlohmann::json to_json(const DeploymentPlan& plan);

} // namespace numaopt::policy
