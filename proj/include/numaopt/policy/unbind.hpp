#pragma once

#include <numaopt/cluster/cluster.hpp>
#include <numaopt/policy/config.hpp>
#include <numaopt/policy/history.hpp>

#include <span>
#include <string>

namespace numaopt::policy {

struct Decision {
    bool value = false;
    std::string reason;

    explicit operator bool() const noexcept { return value; }
};

/// Strategy A: container over quota and its node hot.
Decision should_unbind_A(const cluster::ContainerInstance& container,
                         std::span<const double> node_utils, const PolicyConfig& config);

/// Strategy B: node imbalanced beyond the band, above its own P95, and the
/// container over quota. History must not yet contain the current sample.
Decision should_unbind_B(const cluster::ContainerInstance& container,
                         std::span<const double> node_utils, const UtilizationHistory& history,
                         const PolicyConfig& config);

/// Dispatches on config.strategy.
Decision should_unbind(const cluster::ContainerInstance& container,
                       std::span<const double> node_utils, const UtilizationHistory& history,
                       const PolicyConfig& config);

} // namespace numaopt::policy
