#pragma once

#include <numaopt/cluster/cluster.hpp>
#include <numaopt/common/rng.hpp>
#include <numaopt/metrics/features.hpp>
#include <numaopt/sim/allocation.hpp>
#include <numaopt/sim/load_curve.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace numaopt::sim {

struct SimConfig {
    double tick_s = 1.0;
    double duration_s = 3600.0;
    std::uint64_t seed = 1;
    // Per scheduling burst, an unbound thread is moved by the load balancer
    // to another node with this probability; otherwise NUMA balancing keeps
    // (or pulls) it on the node holding most of its mapped pages.
    double migration_prob_per_burst = 0.5;
    double saturation_exponent = 1.0;
    double window_s = 60.0;
    double page_turnover_per_hour = 0.2;    // fraction of footprint re-touched per hour
    double analytic_burst_threshold = 1e4;  // bursts per tick above which weights are analytic
    double util_jitter = 0.05;              // relative uniform noise on cpu_util
    double initial_footprint = 0.5;         // footprint fraction at load multiplier 0
    double cpu_freq_ghz = 2.7;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

using MetricsLog = std::vector<metrics::MetricsSample>;

/// What the simulator knows about one container beyond its ContainerInstance.
struct ContainerRuntime {
    Rng rng{0};       // burst lengths and hops
    Rng util_rng{0};  // utilization jitter
    cluster::NodeId thread_node = 0;
    double turnover_carry = 0.0;
    std::vector<double> thread_time;  // last tick's run-time share per node
    double locality = 1.0;            // last tick
    double latency_ns = 0.0;          // last tick
    double cpi = 0.0;                 // last tick
    double mbw_gbs = 0.0;             // last tick

    // open window accumulator
    double win_start = 0.0;
    double win_len = 0.0;
    double win_mbw = 0.0, win_remote = 0.0, win_total_bw = 0.0;
    double win_cpu = 0.0, win_mem = 0.0, win_loc = 0.0;
    double win_stall = 0.0, win_cycles = 0.0;
};

struct SimState {
    double clock = 0.0;
    std::vector<cluster::Server> servers;
    std::vector<cluster::ContainerInstance> containers;
    std::vector<ContainerRuntime> runtime;          // parallel to containers
    std::vector<NodeMemoryLedger> ledgers;          // parallel to servers
    MetricsLog metrics_log;
};

/// Discrete-time simulation of containers on NUMA servers. Single owner; all
/// randomness comes from per-container sub-streams of SimConfig::seed, so
/// identical (config, initial state, action sequence) gives identical logs.
class Simulator {
public:
    /// Containers must reference servers in `servers` and services in
    /// `catalog`; each container gets registered on its server.
    Simulator(SimConfig config, cluster::ServiceCatalog catalog, LoadCurveSet curves,
              std::vector<cluster::Server> servers,
              std::vector<cluster::ContainerInstance> containers);

    /// Advances one tick. Throws std::logic_error past the configured
    /// duration; propagates AllocationError.
    void step();

    /// Steps until the clock reaches `t` (or the duration), then flushes any
    /// open window if the end of the run was reached.
    void run_until(double t);

    /// Emits partial windows for every container.
    void flush_windows();

    bool finished() const noexcept;
    double clock() const noexcept { return state_.clock; }

    /// Changes the bind state. Existing pages stay where they are.
    void set_bind_state(const std::string& container_id, cluster::BindState state);

    const SimState& state() const noexcept { return state_; }
    const SimConfig& config() const noexcept { return config_; }
    const cluster::ServiceCatalog& catalog() const noexcept { return catalog_; }
    const std::vector<cluster::ContainerInstance>& containers() const noexcept {
        return state_.containers;
    }
    const std::vector<cluster::Server>& servers() const noexcept { return state_.servers; }
    const MetricsLog& metrics_log() const noexcept { return state_.metrics_log; }

    std::optional<std::size_t> index_of(const std::string& container_id) const;
    const ContainerRuntime& runtime(std::size_t container_index) const {
        return state_.runtime.at(container_index);
    }

private:
    void step_server(std::size_t server_index, const std::vector<std::size_t>& members);
    std::vector<double> thread_weights(std::size_t ci, const cluster::ServiceProfile& profile);
    cluster::NodeId preferred_node(const cluster::ContainerInstance& c) const;
    void allocate_by_weights(std::size_t ci, std::size_t si, std::int64_t pages,
                             double rss_ratio, const std::vector<double>& weights);
    void close_window(std::size_t ci);

    SimConfig config_;
    cluster::ServiceCatalog catalog_;
    LoadCurveSet curves_;
    SimState state_;
    std::vector<std::vector<std::size_t>> members_;  // container indices per server
    std::map<std::string, std::size_t> container_index_;
};

/// Stationary run-time share on the preferred node for the thread hop model:
/// r / (p + r) with r = (1 - p) + p / (nodes - 1).
double stationary_preferred_share(double migration_prob, std::size_t node_count);

} // namespace numaopt::sim
