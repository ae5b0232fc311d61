#include <numaopt/policy/unbind.hpp>

#include <numaopt/common/csv.hpp>

#include <algorithm>
#include <limits>

namespace numaopt::policy {

namespace {

std::string num(double v) {
    return csv::format_double(v);
}

Decision no(std::string why) {
    return {false, std::move(why)};
}

} // namespace

Decision should_unbind_A(const cluster::ContainerInstance& c, std::span<const double> node_utils,
                         const PolicyConfig& config) {
    if (!c.bind_state.is_bound()) {
        return no("not bound");
    }
    const double node_util = node_utils[static_cast<std::size_t>(c.bind_state.node())];
    if (!(c.current_util > config.quota_over)) {
        return no("util " + num(c.current_util) + " <= quota " + num(config.quota_over));
    }
    if (!(node_util > config.node_util_hot)) {
        return no("node util " + num(node_util) + " <= hot " + num(config.node_util_hot));
    }
    return {true, "A: util " + num(c.current_util) + " > quota; node " +
                      std::to_string(c.bind_state.node()) + " util " + num(node_util) + " > hot"};
}

Decision should_unbind_B(const cluster::ContainerInstance& c, std::span<const double> node_utils,
                         const UtilizationHistory& history, const PolicyConfig& config) {
    if (!c.bind_state.is_bound()) {
        return no("not bound");
    }
    if (history.empty()) {
        return no("cold start: no utilization history");
    }
    const auto bound = static_cast<std::size_t>(c.bind_state.node());
    const double node_util = node_utils[bound];
    double min_other = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < node_utils.size(); ++n) {
        if (n != bound) {
            min_other = std::min(min_other, node_utils[n]);
        }
    }
    const double imbalance = node_util - min_other;
    if (!(imbalance > config.imbalance_band)) {
        return no("imbalance " + num(imbalance) + " <= band " + num(config.imbalance_band));
    }
    const double p95 = history.p95(bound);
    if (!(node_util > p95)) {
        return no("node util " + num(node_util) + " <= p95 " + num(p95));
    }
    if (!(c.current_util > config.quota_over)) {
        return no("util " + num(c.current_util) + " <= quota " + num(config.quota_over));
    }
    return {true, "B: imbalance " + num(imbalance) + " > band; node " + std::to_string(bound) +
                      " util " + num(node_util) + " > p95 " + num(p95) + "; util " +
                      num(c.current_util) + " > quota"};
}

Decision should_unbind(const cluster::ContainerInstance& c, std::span<const double> node_utils,
                       const UtilizationHistory& history, const PolicyConfig& config) {
    return config.strategy == Strategy::A ? should_unbind_A(c, node_utils, config)
                                          : should_unbind_B(c, node_utils, history, config);
}

} // namespace numaopt::policy
