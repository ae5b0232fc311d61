#include <numaopt/policy/config.hpp>

#include <stdexcept>

namespace numaopt::policy {

std::string to_string(Strategy s) {
    return s == Strategy::A ? "A" : "B";
}

Strategy parse_strategy(const std::string& text) {
    if (text == "A" || text == "a") return Strategy::A;
    if (text == "B" || text == "b") return Strategy::B;
    throw std::invalid_argument("strategy must be A or B, got '" + text + "'");
}

void PolicyConfig::validate() const {
    auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
    if (!(node_util_hot > 0.0 && node_util_hot <= 1.0)) {
        fail("policy.node_util_hot must be in (0,1]");
    }
    // Allow a hair of slack so 0.15 written in JSON is not rejected by rounding.
    if (!(imbalance_band >= 0.10 - 1e-12 && imbalance_band <= 0.15 + 1e-12)) {
        fail("policy.imbalance_band must be in [0.10,0.15]");
    }
    if (!(quota_over > 0.0)) fail("policy.quota_over must be > 0");
    if (!(p95_window_s > 0.0)) fail("policy.p95_window_s must be > 0");
    if (!(rebind_cool >= 0.0 && rebind_cool < node_util_hot)) {
        fail("policy.rebind_cool must be in [0, node_util_hot)");
    }
    if (!(min_predicted_improvement >= 0.0 && min_predicted_improvement < 1.0)) {
        fail("policy.min_predicted_improvement must be in [0,1)");
    }
}

} // namespace numaopt::policy
