#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace numaopt::cluster {

using NodeId = int;

/// Accounting granularity for page placement.
inline constexpr std::int64_t kPageSizeBytes = 4096;
inline constexpr std::int64_t kPagesPerMiB = (1024 * 1024) / kPageSizeBytes;

constexpr std::int64_t pages_for_mib(double mib) noexcept {
    return static_cast<std::int64_t>(mib * static_cast<double>(kPagesPerMiB));
}

constexpr double mib_for_pages(std::int64_t pages) noexcept {
    return static_cast<double>(pages) / static_cast<double>(kPagesPerMiB);
}

/// A socket and its directly attached memory.
struct NumaNode {
    NodeId node_id = 0;
    int cores = 1;
    double mem_capacity_mib = 1.0;
    double bw_capacity_gbs = 1.0;
    double local_latency_ns = 1.0;

    bool operator==(const NumaNode&) const = default;
};

/// Set of NUMA nodes with a single uniform cross-node latency.
class NumaTopology {
public:
    /// Throws std::invalid_argument unless there are >= 2 valid nodes with ids
    /// 0..n-1 and remote latency exceeds every local latency.
    NumaTopology(std::vector<NumaNode> nodes, double remote_latency_ns);

    const std::vector<NumaNode>& nodes() const noexcept { return nodes_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    bool contains(NodeId id) const noexcept;
    /// Throws std::out_of_range for unknown ids.
    const NumaNode& node(NodeId id) const;

    double remote_latency_ns() const noexcept { return remote_latency_ns_; }
    int total_cores() const noexcept;

    bool operator==(const NumaTopology&) const = default;

private:
    std::vector<NumaNode> nodes_;
    double remote_latency_ns_;
};

/// Homogeneous topology: every node gets the same cores/memory/bandwidth/latency.
NumaTopology build_topology(int node_count, int cores, double mem_mib, double bw_gbs,
                            double local_latency_ns, double remote_latency_ns);

} // namespace numaopt::cluster

