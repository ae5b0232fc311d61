#include <numaopt/app/label_generator.hpp>

#include <numaopt/common/rng.hpp>
#include <numaopt/policy/placement.hpp>
#include <numaopt/sim/improvement.hpp>

#include <cmath>

namespace numaopt::app {

namespace {

cluster::ServiceProfile corunner_profile(double bw_gbs) {
    cluster::ServiceProfile p;
    p.service_id = "corunner";
    p.cpu_quota = 8.0;
    p.mem_demand_mib = 16384.0;
    p.rss_ratio = 0.8;
    p.bw_demand_peak_gbs = bw_gbs;
    p.compute_cpi = 1.0;
    p.mem_access_intensity = 0.002;
    p.peak_util = 0.8;
    return p;
}

} // namespace

ml::TrainingSample label_profile(const cluster::ServiceProfile& profile,
                                 const TopologySpec& topology, const LabelSpec& spec,
                                 double migration_prob, std::uint64_t seed) {
    sim::PlacementContext ctx{topology.build(), {}, 0};
    ctx.warmup_fraction = spec.warmup_fraction;
    const auto n_nodes = static_cast<cluster::NodeId>(ctx.topology.node_count());
    for (cluster::NodeId n = 0; n < n_nodes; ++n) {
        ctx.co_runners.push_back(
            {corunner_profile(spec.corunner_bw_gbs), cluster::BindState::bound(n), n});
    }

    // The node the scheduler would pick for the target, given its neighbours.
    std::vector<policy::NodeResources> left;
    for (const auto& node : ctx.topology.nodes()) {
        left.push_back({static_cast<double>(node.cores), node.mem_capacity_mib,
                        node.bw_capacity_gbs});
    }
    for (const auto& c : ctx.co_runners) {
        const auto d = policy::demand_of(c.profile);
        auto& l = left[static_cast<std::size_t>(c.home_node)];
        l.cores -= d.cores;
        l.mem_mib -= d.mem_mib;
        l.bw_gbs -= d.bw_gbs;
    }
    // Bandwidth is not reserved here: saturating the chosen node is the point.
    auto demand = policy::demand_of(profile);
    demand.bw_gbs = 0.0;
    ctx.target_node = policy::select_numa_node(ctx.topology, left, demand).value_or(0);

    sim::SimConfig config;
    config.tick_s = spec.tick_s;
    config.duration_s = spec.duration_s;
    config.window_s = std::max(60.0, spec.tick_s);
    config.seed = seed;
    config.migration_prob_per_burst = migration_prob;

    const auto r = sim::measure_improvement(profile, ctx, config);
    return ml::TrainingSample{r.unbound_features, r.improvement, profile.service_id};
}

LabelBatch generate_labels(const TopologySpec& topology, const LabelSpec& spec, std::size_t n,
                           std::uint64_t seed) {
    LabelBatch batch;
    batch.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng{derive_seed(seed, "labels", i)};
        cluster::ServiceProfile p;
        p.service_id = "svc" + std::to_string(i);
        p.cpu_quota = rng.uniform(2.0, 8.0);
        p.mem_demand_mib = rng.uniform(1024.0, 16384.0);
        p.rss_ratio = rng.uniform(0.3, 1.0);
        p.bw_demand_peak_gbs = rng.uniform(2.0, spec.target_bw_max_gbs);
        p.compute_cpi = rng.uniform(0.5, 1.5);
        p.mem_access_intensity = std::exp(rng.uniform(std::log(spec.intensity_min), std::log(spec.intensity_max)));
        p.peak_util = rng.uniform(0.5, 1.0);
        const double migration_prob = std::exp(rng.uniform(std::log(0.02), 0.0));
        try {
            batch.samples.push_back(label_profile(p, topology, spec, migration_prob,
                                                  derive_seed(seed, "label-sim", i)));
        } catch (const std::exception&) {
            ++batch.skipped;
        }
    }
    return batch;
}

} // namespace numaopt::app
