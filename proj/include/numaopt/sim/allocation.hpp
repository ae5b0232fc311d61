#pragma once

#include <numaopt/cluster/cluster.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace numaopt::sim {

class AllocationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Free/used page accounting for the nodes of one server.
class NodeMemoryLedger {
public:
    explicit NodeMemoryLedger(const cluster::NumaTopology& topology);

    std::int64_t capacity(cluster::NodeId n) const { return capacity_.at(idx(n)); }
    std::int64_t used(cluster::NodeId n) const { return used_.at(idx(n)); }
    std::int64_t free(cluster::NodeId n) const { return capacity(n) - used(n); }
    std::int64_t total_free() const noexcept;
    std::size_t node_count() const noexcept { return capacity_.size(); }

    void take(cluster::NodeId n, std::int64_t pages);
    void give_back(cluster::NodeId n, std::int64_t pages);

private:
    static std::size_t idx(cluster::NodeId n) { return static_cast<std::size_t>(n); }

    std::vector<std::int64_t> capacity_;
    std::vector<std::int64_t> used_;
};

/// Pages placed by one allocation, per node.
struct PagePlacement {
    std::vector<std::int64_t> rss;
    std::vector<std::int64_t> cache;
};

/// First-touch allocation of `pages` new pages for a thread running on
/// `running_node`. The mapped share (round(pages * rss_ratio)) lands on the
/// running node while it has room and spills to the node with the most free
/// memory (lowest id on ties). The page-cache remainder is placed round-robin
/// across nodes starting at the container's cursor, skipping full nodes.
/// Throws AllocationError, leaving everything untouched, when the server as a
/// whole cannot hold the request.
PagePlacement first_touch_allocate(cluster::ContainerInstance& container, std::int64_t pages,
                                   double rss_ratio, cluster::NodeId running_node,
                                   const cluster::NumaTopology& topology,
                                   NodeMemoryLedger& ledger);

/// Frees `pages` pages spread proportionally over the container's current
/// placement (largest remainder; mapped before cache, lower node first on
/// ties). Returns what was freed.
PagePlacement release_pages(cluster::ContainerInstance& container, std::int64_t pages,
                            NodeMemoryLedger& ledger);

/// Splits `total` into integer parts proportional to `weights` (largest
/// remainder, lowest index first on ties). Weights must be >= 0 with a
/// positive sum.
std::vector<std::int64_t> apportion(std::int64_t total, std::span<const double> weights);

} // namespace numaopt::sim
