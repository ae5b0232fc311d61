#include <numaopt/app/runner.hpp>

#include <numaopt/common/rng.hpp>
#include <numaopt/policy/placement.hpp>

#include <algorithm>
#include <map>

namespace numaopt::app {

using cluster::BindState;
using cluster::ContainerInstance;

namespace {

struct Placement {
    std::vector<cluster::Server> servers;
    std::vector<ContainerInstance> containers;
};

Placement place(const ExperimentSpec& spec, const cluster::ServiceCatalog& catalog, bool bind) {
    Placement out;
    const auto topo = spec.topology.build();
    for (std::size_t s = 0; s < spec.servers; ++s) {
        out.servers.emplace_back("server" + std::to_string(s), topo);
    }

    std::vector<std::pair<std::string, std::string>> pending;  // (container, service)
    for (const auto& svc : spec.services) {
        for (std::size_t i = 0; i < svc.instances; ++i) {
            pending.emplace_back(svc.profile.service_id + "-" + std::to_string(i),
                                 svc.profile.service_id);
        }
    }
    Rng rng{derive_seed(spec.seed, "placement")};
    for (std::size_t i = pending.size(); i > 1; --i) {
        std::swap(pending[i - 1], pending[rng.below(i)]);
    }

    for (const auto& [id, service] : pending) {
        const auto demand = policy::demand_of(cluster::profile_of(catalog, service));
        // Server with the most unreserved cores.
        std::size_t best = 0;
        double best_cores = -1e300;
        for (std::size_t s = 0; s < out.servers.size(); ++s) {
            double cores = 0.0;
            for (const auto& l :
                 policy::node_leftovers(out.servers[s], out.containers, catalog)) {
                cores += l.cores;
            }
            if (cores > best_cores) {
                best = s;
                best_cores = cores;
            }
        }
        const auto& server = out.servers[best];
        const auto node = policy::select_numa_node(server, demand, out.containers, catalog);
        const auto state = bind && node ? BindState::bound(*node) : BindState::unbound();
        out.containers.push_back(
            cluster::make_instance(id, service, server.server_id(), topo, state, node.value_or(0)));
    }
    return out;
}

} // namespace

RunSummary summarize(const sim::MetricsLog& log, const cluster::ServiceCatalog& catalog) {
    RunSummary s;
    if (log.empty()) {
        return s;
    }
    for (const auto& m : log) {
        const double cpi = metrics::window_cpi(m, cluster::profile_of(catalog, m.service_id).compute_cpi);
        s.mean_cpi += cpi;
        s.mean_ipc += 1.0 / cpi;
        s.mean_locality += m.locality;
        s.cpu_cycles += m.total_cycles;
    }
    const auto n = static_cast<double>(log.size());
    s.mean_cpi /= n;
    s.mean_ipc /= n;
    s.mean_locality /= n;
    return s;
}

RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
    const auto catalog = spec.catalog();
    Placement placed = place(spec, catalog, options.optimize && spec.bind_at_placement);

    sim::SimConfig config = spec.sim;
    config.seed = derive_seed(spec.seed, "sim");
    std::vector<cluster::Server> servers = placed.servers;
    sim::Simulator simulator(config, catalog, spec.curves, std::move(placed.servers),
                             std::move(placed.containers));

    policy::PolicyConfig pcfg = spec.policy;
    pcfg.strategy = options.strategy;
    std::vector<policy::UtilizationHistory> history;
    for (const auto& s : servers) {
        history.emplace_back(pcfg.p95_window_s, s.topology().node_count());
    }

    RunResult result;
    std::map<std::string, metrics::MetricsSample> last;
    std::size_t seen = 0;
    const double interval = std::max(spec.optimizer_interval_s, config.tick_s);
    while (!simulator.finished()) {
        simulator.run_until(simulator.clock() + interval);
        if (!options.optimize || simulator.finished()) {
            continue;
        }
        const auto& log = simulator.metrics_log();
        for (; seen < log.size(); ++seen) {
            last[log[seen].container_id] = log[seen];
        }
        // The policy sees window averages, not the last tick.
        std::vector<ContainerInstance> view = simulator.containers();
        std::map<std::string, metrics::FeatureVector> features;
        for (auto& c : view) {
            if (auto it = last.find(c.container_id); it != last.end()) {
                c.current_util = it->second.cpu_util;
                features[c.container_id] = metrics::compute_features(it->second);
            }
        }
        const double now = simulator.clock();
        for (std::size_t s = 0; s < servers.size(); ++s) {
            const auto utils = cluster::node_utilizations(servers[s], view, catalog);
            const auto actions = policy::optimizer_tick(servers[s], view, catalog, history[s],
                                                        pcfg, options.predictor, features);
            history[s].append(now, utils);
            for (const auto& a : actions) {
                if (a.kind == policy::OptimizerAction::Kind::NoOp) {
                    continue;
                }
                const auto state = a.kind == policy::OptimizerAction::Kind::Bind
                                       ? BindState::bound(a.node)
                                       : BindState::unbound();
                simulator.set_bind_state(a.container_id, state);
                result.actions.push_back({now, servers[s].server_id(), a});
            }
        }
    }

    result.metrics = simulator.metrics_log();
    result.summary = summarize(result.metrics, catalog);
    result.summary.instance_time =
        static_cast<double>(simulator.containers().size()) * simulator.clock();
    for (const auto& a : result.actions) {
        if (a.action.kind == policy::OptimizerAction::Kind::Unbind) ++result.summary.unbind_actions;
        if (a.action.kind == policy::OptimizerAction::Kind::Bind) ++result.summary.bind_actions;
    }
    if (result.summary.instance_time > 0.0) {
        result.summary.unbind_ratio = policy::unbind_ratio(
            result.actions, result.summary.instance_time, simulator.clock());
    }
    return result;
}

} // namespace numaopt::app
