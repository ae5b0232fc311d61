#include <numaopt/policy/optimizer.hpp>

#include <numaopt/common/csv.hpp>
#include <numaopt/policy/placement.hpp>
#include <numaopt/policy/unbind.hpp>

#include <algorithm>
#include <optional>

namespace numaopt::policy {

OptimizerAction OptimizerAction::bind(std::string id, cluster::NodeId node, std::string reason) {
    return {Kind::Bind, std::move(id), node, std::move(reason)};
}

OptimizerAction OptimizerAction::unbind(std::string id, std::string reason) {
    return {Kind::Unbind, std::move(id), -1, std::move(reason)};
}

OptimizerAction OptimizerAction::noop(std::string reason) {
    return {Kind::NoOp, {}, -1, std::move(reason)};
}

std::string to_string(OptimizerAction::Kind kind) {
    switch (kind) {
    case OptimizerAction::Kind::Bind:
        return "bind";
    case OptimizerAction::Kind::Unbind:
        return "unbind";
    case OptimizerAction::Kind::NoOp:
        break;
    }
    return "noop";
}

std::vector<OptimizerAction> optimizer_tick(
    const cluster::Server& server, std::span<const cluster::ContainerInstance> instances,
    const cluster::ServiceCatalog& catalog, const UtilizationHistory& history,
    const PolicyConfig& config, const ImprovementPredictor& predict,
    const std::map<std::string, metrics::FeatureVector>& features) {
    // Working copy of this server's containers; actions are applied to it so
    // later decisions in the same tick see earlier ones.
    std::vector<cluster::ContainerInstance> work;
    for (const auto& c : instances) {
        if (c.server_id == server.server_id()) {
            work.push_back(c);
        }
    }
    std::sort(work.begin(), work.end(),
              [](const auto& a, const auto& b) { return a.container_id < b.container_id; });

    std::vector<OptimizerAction> actions;

    // Phase 1: unbind.
    for (;;) {
        const auto utils = cluster::node_utilizations(server, work, catalog);
        struct Trigger {
            std::size_t index;
            double cores;
            std::string reason;
        };
        std::optional<std::size_t> hot;
        std::vector<Trigger> triggers;
        for (std::size_t i = 0; i < work.size(); ++i) {
            const auto d = should_unbind(work[i], utils, history, config);
            if (!d) {
                continue;
            }
            const auto node = static_cast<std::size_t>(work[i].bind_state.node());
            if (!hot || utils[node] > utils[*hot]) {
                hot = node;
            }
            triggers.push_back({i, cluster::cores_used(work[i], catalog), d.reason});
        }
        if (triggers.empty()) {
            break;
        }
        const Trigger* victim = nullptr;
        for (const auto& t : triggers) {
            if (static_cast<std::size_t>(work[t.index].bind_state.node()) != *hot) {
                continue;
            }
            // `work` is id-sorted, so strict < keeps the lowest id on ties.
            if (!victim || t.cores < victim->cores) {
                victim = &t;
            }
        }
        auto& c = work[victim->index];
        actions.push_back(OptimizerAction::unbind(
            c.container_id,
            victim->reason + "; least consumption " + csv::format_double(victim->cores) + " cores"));
        c.bind_state = cluster::BindState::unbound();
    }
    if (!actions.empty()) {
        return actions;
    }

    // Phase 2: bind.
    std::string idle_reason = "no unbind trigger; no bind candidate";
    for (auto& c : work) {
        if (c.bind_state.is_bound()) {
            continue;
        }
        const auto utils = cluster::node_utilizations(server, work, catalog);
        const double max_util = *std::max_element(utils.begin(), utils.end());
        if (!(max_util < config.rebind_cool)) {
            idle_reason = "no unbind trigger; node util " + csv::format_double(max_util) +
                          " not below rebind_cool";
            break;
        }
        const auto f = features.find(c.container_id);
        if (f == features.end() || !predict) {
            continue;
        }
        const double gain = predict(f->second);
        if (!(gain > config.min_predicted_improvement)) {
            continue;
        }
        const auto node = select_numa_node(
            server, demand_of(cluster::profile_of(catalog, c.service_id)), work, catalog,
            c.container_id);
        if (!node) {
            continue;
        }
        actions.push_back(OptimizerAction::bind(
            c.container_id, *node,
            "predicted improvement " + csv::format_double(gain) + " > threshold; nodes cool"));
        c.bind_state = cluster::BindState::bound(*node);
    }
    if (actions.empty()) {
        actions.push_back(OptimizerAction::noop(idle_reason));
    }
    return actions;
}

} // namespace numaopt::policy
