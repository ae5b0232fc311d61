#include <numaopt/policy/deployment.hpp>

#include <algorithm>

namespace numaopt::policy {

bool DeploymentPlan::contains(const std::string& service_id) const {
    return std::any_of(services.begin(), services.end(),
                       [&](const auto& e) { return e.first == service_id; });
}

DeploymentPlan select_top_services(const std::map<std::string, double>& predictions,
                                   std::size_t k, const PolicyConfig& config) {
    DeploymentPlan plan;
    if (k == 0) {
        return plan;
    }
    for (const auto& [id, gain] : predictions) {
        if (gain > config.min_predicted_improvement) {
            plan.services.emplace_back(id, gain);
        }
    }
    // map order makes ties fall back to service id
    std::stable_sort(plan.services.begin(), plan.services.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (plan.services.size() > k) {
        plan.services.resize(k);
    }
    return plan;
}

std::vector<std::string> apply_plan(DeploymentPlan& plan,
                                    std::vector<cluster::ContainerInstance>& containers,
                                    const NodeChooser& choose) {
    std::vector<std::string> changed;
    for (auto& c : containers) {
        if (plan.contains(c.service_id)) {
            plan.prior_states.try_emplace(c.container_id, c.bind_state);
        }
    }
    for (auto& c : containers) {
        if (!plan.contains(c.service_id)) {
            continue;
        }
        const auto node = choose(c, containers);
        if (!node) {
            continue;
        }
        const auto next = cluster::BindState::bound(*node);
        if (!(c.bind_state == next)) {
            c.bind_state = next;
            changed.push_back(c.container_id);
        }
    }
    plan.applied = true;
    return changed;
}

RollbackReport rollback(const DeploymentPlan& plan,
                        std::vector<cluster::ContainerInstance>& containers) {
    RollbackReport report;
    if (!plan.applied) {
        report.warning = "plan was never applied; nothing to roll back";
        return report;
    }
    for (const auto& [id, state] : plan.prior_states) {
        auto it = std::find_if(containers.begin(), containers.end(),
                               [&](const auto& c) { return c.container_id == id; });
        if (it == containers.end()) {
            report.exited.push_back(id);
            continue;
        }
        it->bind_state = state;
        report.restored.push_back(id);
    }
    return report;
}

nlohmann::json to_json(const DeploymentPlan& plan) {
    nlohmann::json services = nlohmann::json::array();
    for (const auto& [id, gain] : plan.services) {
        services.push_back({{"service_id", id}, {"predicted_improvement", gain}});
    }
    nlohmann::json prior = nlohmann::json::object();
    for (const auto& [id, state] : plan.prior_states) {
        prior[id] = state.to_string();
    }
    return {{"services", services}, {"applied", plan.applied}, {"prior_states", prior}};
}

} // namespace numaopt::policy
