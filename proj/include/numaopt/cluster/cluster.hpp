#pragma once

#include <numaopt/cluster/topology.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace numaopt::cluster {

/// Either pinned to one NUMA node (cpuset-style) or free to run anywhere.
class BindState {
public:
    static BindState unbound() noexcept { return BindState{}; }
    static BindState bound(NodeId node) noexcept { return BindState{node}; }

    bool is_bound() const noexcept { return node_.has_value(); }
    /// Precondition: is_bound().
    NodeId node() const { return node_.value(); }

    /// "unbound" or "bound:<node>".
    std::string to_string() const;
    /// Inverse of to_string(); throws std::invalid_argument on bad input.
    static BindState parse(const std::string& text);

    bool operator==(const BindState&) const = default;

private:
    BindState() = default;
    explicit BindState(NodeId node) : node_(node) {}

    std::optional<NodeId> node_;
};

struct ServiceProfile {
    std::string service_id;
    double cpu_quota = 1.0;            // cores per instance
    double mem_demand_mib = 1024.0;    // full footprint at peak load
    double rss_ratio = 1.0;            // mapped-page share of the footprint
    double bw_demand_peak_gbs = 1.0;   // DRAM bandwidth at full load
    double compute_cpi = 1.0;          // cycles/instruction without memory stalls
    double mem_access_intensity = 0.0; // DRAM accesses per instruction
    double burst_ms_low = 0.4;
    double burst_ms_high = 10.0;
    std::string load_curve_id = "flat";
    double peak_util = 1.0;            // cpu_util (fraction of quota) at load multiplier 1.0

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

using ServiceCatalog = std::map<std::string, ServiceProfile>;

/// Looks up a profile; throws std::out_of_range naming the service.
const ServiceProfile& profile_of(const ServiceCatalog& catalog, const std::string& service_id);

struct ContainerInstance {
    std::string container_id;
    std::string service_id;
    std::string server_id;
    BindState bind_state = BindState::unbound();
    NodeId home_node = 0;              // node chosen at placement; start node of its threads
    std::vector<std::int64_t> rss_pages;   // mapped pages per node
    std::vector<std::int64_t> cache_pages; // page-cache pages per node
    double current_util = 0.0;         // fraction of quota in use
    std::size_t cache_cursor = 0;      // next node for round-robin page-cache placement

    std::vector<std::int64_t> pages_per_node() const;
    std::int64_t total_pages() const noexcept;
    std::int64_t total_rss_pages() const noexcept;
};

/// Creates an instance with empty page maps sized for `topology`.
ContainerInstance make_instance(std::string container_id, std::string service_id,
                                std::string server_id, const NumaTopology& topology,
                                BindState bind_state, NodeId home_node);

class Server {
public:
    Server(std::string server_id, NumaTopology topology);

    const std::string& server_id() const noexcept { return server_id_; }
    const NumaTopology& topology() const noexcept { return topology_; }
    const std::vector<std::string>& hosted() const noexcept { return hosted_; }

    /// Throws std::invalid_argument if the id is already hosted.
    void host(const std::string& container_id);
    void evict(const std::string& container_id);
    bool hosts(const std::string& container_id) const noexcept;

private:
    std::string server_id_;
    NumaTopology topology_;
    std::vector<std::string> hosted_;
};

/// CPU utilization of one node: cores used by instances bound to it, plus an
/// even share of every unbound instance's usage, over the node's core count.
/// Only instances whose server_id matches `server` are counted.
double node_utilization(const Server& server, NodeId node_id,
                        std::span<const ContainerInstance> instances,
                        const ServiceCatalog& catalog);

/// node_utilization for every node of the server, in node-id order.
std::vector<double> node_utilizations(const Server& server,
                                      std::span<const ContainerInstance> instances,
                                      const ServiceCatalog& catalog);

/// Cores in use by an instance: current_util * cpu_quota.
double cores_used(const ContainerInstance& instance, const ServiceCatalog& catalog);

/// Fraction of accesses served locally, given where the pages live and the
/// share of thread run time spent on each node (`thread_time`, indexed by
/// node id, summing to 1 within 1e-9). Pages are assumed uniformly accessed.
double locality_ratio(std::span<const std::int64_t> pages_per_node,
                      std::span<const double> thread_time);

double locality_ratio(const ContainerInstance& container, std::span<const double> thread_time);

} // namespace numaopt::cluster
