#include <numaopt/cluster/topology.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace numaopt::cluster {

NumaTopology::NumaTopology(std::vector<NumaNode> nodes, double remote_latency_ns)
    : nodes_(std::move(nodes))
    , remote_latency_ns_(remote_latency_ns) {
    if (nodes_.size() < 2) {
        throw std::invalid_argument("topology needs at least 2 NUMA nodes");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const NumaNode& n = nodes_[i];
        const std::string where = "node " + std::to_string(i);
        if (n.node_id != static_cast<NodeId>(i)) {
            throw std::invalid_argument(where + ": node ids must be 0..n-1 in order");
        }
        if (n.cores < 1) {
            throw std::invalid_argument(where + ": cores must be >= 1");
        }
        if (!(n.mem_capacity_mib > 0.0)) {
            throw std::invalid_argument(where + ": mem_capacity must be > 0");
        }
        if (!(n.bw_capacity_gbs > 0.0)) {
            throw std::invalid_argument(where + ": bw_capacity must be > 0");
        }
        if (!(n.local_latency_ns > 0.0)) {
            throw std::invalid_argument(where + ": local_latency must be > 0");
        }
        if (!(remote_latency_ns_ > n.local_latency_ns)) {
            throw std::invalid_argument("remote latency must exceed local latency");
        }
    }
}

bool NumaTopology::contains(NodeId id) const noexcept {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
}

const NumaNode& NumaTopology::node(NodeId id) const {
    if (!contains(id)) {
        throw std::out_of_range("unknown NUMA node " + std::to_string(id));
    }
    return nodes_[static_cast<std::size_t>(id)];
}

int NumaTopology::total_cores() const noexcept {
    int total = 0;
    for (const auto& n : nodes_) {
        total += n.cores;
    }
    return total;
}

NumaTopology build_topology(int node_count, int cores, double mem_mib, double bw_gbs,
                            double local_latency_ns, double remote_latency_ns) {
    if (node_count < 2) {
        throw std::invalid_argument("node_count must be >= 2");
    }
    std::vector<NumaNode> nodes;
    nodes.reserve(static_cast<std::size_t>(node_count));
    for (int i = 0; i < node_count; ++i) {
        nodes.push_back(NumaNode{i, cores, mem_mib, bw_gbs, local_latency_ns});
    }
    return NumaTopology{std::move(nodes), remote_latency_ns};
}

} // namespace numaopt::cluster
