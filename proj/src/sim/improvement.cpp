#include <numaopt/sim/improvement.hpp>

#include <limits>
#include <stdexcept>

namespace numaopt::sim {

namespace {

constexpr const char* kTargetId = "target";

struct RunSummary {
    double mean_cpi = 0.0;
    double mean_locality = 0.0;
    metrics::MetricsSample steady;
};

RunSummary run_one(const cluster::ServiceProfile& profile, const PlacementContext& context,
                   const SimConfig& config, cluster::BindState target_state) {
    cluster::ServiceCatalog catalog;
    cluster::ServiceProfile target = profile;
    target.service_id = kTargetId;
    catalog.emplace(target.service_id, target);

    const std::string server_id = "s0";
    std::vector<cluster::ContainerInstance> containers;
    containers.push_back(cluster::make_instance(kTargetId, kTargetId, server_id, context.topology,
                                                target_state, context.target_node));
    for (std::size_t i = 0; i < context.co_runners.size(); ++i) {
        cluster::ServiceProfile p = context.co_runners[i].profile;
        p.service_id = "corunner" + std::to_string(i);
        catalog.emplace(p.service_id, p);
        containers.push_back(cluster::make_instance(p.service_id, p.service_id, server_id,
                                                    context.topology,
                                                    context.co_runners[i].bind_state,
                                                    context.co_runners[i].home_node));
    }

    std::vector<cluster::Server> servers;
    servers.emplace_back(server_id, context.topology);
    Simulator sim(config, std::move(catalog), context.curves, std::move(servers),
                  std::move(containers));
    sim.run_until(config.duration_s);

    const double measure_from = context.warmup_fraction * config.duration_s;
    std::vector<metrics::MetricsSample> steady;
    double cpi_sum = 0.0;
    double loc_sum = 0.0;
    for (const auto& s : sim.metrics_log()) {
        if (s.container_id != kTargetId || s.window_start + 1e-9 < measure_from) {
            continue;
        }
        steady.push_back(s);
        cpi_sum += metrics::window_cpi(s, profile.compute_cpi);
        loc_sum += s.locality;
    }
    if (steady.empty()) {
        throw std::runtime_error("measure_improvement: no windows after warm-up");
    }
    RunSummary out;
    out.mean_cpi = cpi_sum / static_cast<double>(steady.size());
    out.mean_locality = loc_sum / static_cast<double>(steady.size());
    out.steady = metrics::aggregate_windows(steady, std::numeric_limits<double>::max()).front();
    return out;
}

} // namespace

ImprovementResult measure_improvement(const cluster::ServiceProfile& profile,
                                      const PlacementContext& context, const SimConfig& config) {
    profile.validate();
    if (!context.topology.contains(context.target_node)) {
        throw std::invalid_argument("measure_improvement: target node not in topology");
    }
    if (!(context.warmup_fraction >= 0.0 && context.warmup_fraction < 1.0)) {
        throw std::invalid_argument("measure_improvement: warmup_fraction must be in [0,1)");
    }
    const RunSummary unbound = run_one(profile, context, config, cluster::BindState::unbound());
    const RunSummary bound =
        run_one(profile, context, config, cluster::BindState::bound(context.target_node));

    ImprovementResult r;
    r.cpi_unbound = unbound.mean_cpi;
    r.cpi_bound = bound.mean_cpi;
    r.improvement = (unbound.mean_cpi - bound.mean_cpi) / unbound.mean_cpi;
    r.locality_unbound = unbound.mean_locality;
    r.locality_bound = bound.mean_locality;
    r.unbound_steady_state = unbound.steady;
    r.unbound_features = metrics::compute_features(unbound.steady);
    return r;
}

} // namespace numaopt::sim
