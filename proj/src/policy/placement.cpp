#include <numaopt/policy/placement.hpp>

#include <stdexcept>

namespace numaopt::policy {

using cluster::NodeId;

ResourceDemand demand_of(const cluster::ServiceProfile& profile) {
    return {profile.cpu_quota, profile.mem_demand_mib, profile.bw_demand_peak_gbs};
}

std::vector<NodeResources> node_leftovers(const cluster::Server& server,
                                          std::span<const cluster::ContainerInstance> instances,
                                          const cluster::ServiceCatalog& catalog,
                                          const std::string& exclude) {
    const auto& topo = server.topology();
    std::vector<NodeResources> left;
    for (const auto& n : topo.nodes()) {
        left.push_back({static_cast<double>(n.cores), n.mem_capacity_mib, n.bw_capacity_gbs});
    }
    const auto share = 1.0 / static_cast<double>(topo.node_count());
    for (const auto& c : instances) {
        if (c.server_id != server.server_id() || (!exclude.empty() && c.container_id == exclude)) {
            continue;
        }
        const ResourceDemand d = demand_of(cluster::profile_of(catalog, c.service_id));
        auto take = [&](std::size_t n, double w) {
            left[n].cores -= w * d.cores;
            left[n].mem_mib -= w * d.mem_mib;
            left[n].bw_gbs -= w * d.bw_gbs;
        };
        if (c.bind_state.is_bound()) {
            take(static_cast<std::size_t>(c.bind_state.node()), 1.0);
        } else {
            for (std::size_t n = 0; n < left.size(); ++n) {
                take(n, share);
            }
        }
    }
    return left;
}

std::optional<NodeId> select_numa_node(const cluster::NumaTopology& topology,
                                       std::span<const NodeResources> leftovers,
                                       const ResourceDemand& demand) {
    if (leftovers.size() != topology.node_count()) {
        throw std::invalid_argument("select_numa_node: leftovers do not match topology");
    }
    std::optional<NodeId> best;
    double best_cpu = 0.0, best_bw = 0.0;
    for (std::size_t i = 0; i < leftovers.size(); ++i) {
        const auto& l = leftovers[i];
        const auto& node = topology.nodes()[i];
        if (l.cores < demand.cores || l.mem_mib < demand.mem_mib || l.bw_gbs < demand.bw_gbs) {
            continue;
        }
        const double cpu = (l.cores - demand.cores) / static_cast<double>(node.cores);
        const double bw = (l.bw_gbs - demand.bw_gbs) / node.bw_capacity_gbs;
        if (!best || cpu > best_cpu || (cpu == best_cpu && bw > best_bw)) {
            best = static_cast<NodeId>(i);
            best_cpu = cpu;
            best_bw = bw;
        }
    }
    return best;
}

std::optional<NodeId> select_numa_node(const cluster::Server& server, const ResourceDemand& demand,
                                       std::span<const cluster::ContainerInstance> instances,
                                       const cluster::ServiceCatalog& catalog,
                                       const std::string& exclude) {
    const auto left = node_leftovers(server, instances, catalog, exclude);
    return select_numa_node(server.topology(), left, demand);
}

} // namespace numaopt::policy
