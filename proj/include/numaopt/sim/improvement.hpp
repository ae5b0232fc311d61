#pragma once

#include <numaopt/cluster/cluster.hpp>
#include <numaopt/metrics/features.hpp>
#include <numaopt/sim/load_curve.hpp>
#include <numaopt/sim/simulator.hpp>

#include <vector>

namespace numaopt::sim {

struct CoRunner {
    cluster::ServiceProfile profile;
    cluster::BindState bind_state = cluster::BindState::unbound();
    cluster::NodeId home_node = 0;
};

/// Server and neighbours a labeled container is measured against.
struct PlacementContext {
    cluster::NumaTopology topology;
    std::vector<CoRunner> co_runners;
    cluster::NodeId target_node = 0;  // scheduler's node: bind target and unbound start node
    LoadCurveSet curves = builtin_load_curves();
    double warmup_fraction = 0.25;    // leading share of the run excluded from measurement
};

struct ImprovementResult {
    double improvement = 0.0;  // (cpi_unbound - cpi_bound) / cpi_unbound
    double cpi_unbound = 0.0;
    double cpi_bound = 0.0;
    double locality_unbound = 0.0;
    double locality_bound = 0.0;
    metrics::MetricsSample unbound_steady_state;  // target's counters after warm-up
    metrics::FeatureVector unbound_features;
};

/// Paired simulation with the same seed and neighbours: the target runs
/// unbound in one and bound to `context.target_node` in the other. Latency is
/// taken as proportional to the mean window CPI after warm-up. The result may
/// be negative when binding concentrates bandwidth on a saturated node.
ImprovementResult measure_improvement(const cluster::ServiceProfile& profile,
                                      const PlacementContext& context, const SimConfig& config);

} // namespace numaopt::sim
