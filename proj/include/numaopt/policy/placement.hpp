#pragma once

#include <numaopt/cluster/cluster.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace numaopt::policy {

struct ResourceDemand {
    double cores = 0.0;
    double mem_mib = 0.0;
    double bw_gbs = 0.0;
};

/// Reservation of a service instance: quota cores, full footprint, peak bandwidth.
ResourceDemand demand_of(const cluster::ServiceProfile& profile);

struct NodeResources {
    double cores = 0.0;
    double mem_mib = 0.0;
    double bw_gbs = 0.0;
};

/// What is left on each node after reservations: bound instances reserve on
/// their node, unbound ones are split evenly across nodes. Instances on other
/// servers and the one named `exclude` are ignored.
std::vector<NodeResources> node_leftovers(const cluster::Server& server,
                                          std::span<const cluster::ContainerInstance> instances,
                                          const cluster::ServiceCatalog& catalog,
                                          const std::string& exclude = {});

/// Lexicographic choice: feasible on cores, memory and bandwidth; then the
/// largest leftover CPU fraction after placement; then the largest leftover
/// bandwidth fraction; then the lowest node id. nullopt when no node fits.
std::optional<cluster::NodeId> select_numa_node(const cluster::NumaTopology& topology,
                                                std::span<const NodeResources> leftovers,
                                                const ResourceDemand& demand);

std::optional<cluster::NodeId> select_numa_node(
    const cluster::Server& server, const ResourceDemand& demand,
    std::span<const cluster::ContainerInstance> instances, const cluster::ServiceCatalog& catalog,
    const std::string& exclude = {});

} // namespace numaopt::policy
