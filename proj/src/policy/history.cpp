#include <numaopt/policy/history.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace numaopt::policy {

double nearest_rank_percentile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw std::logic_error("percentile of an empty set");
    }
    if (!(q > 0.0 && q <= 1.0)) {
        throw std::invalid_argument("percentile rank must be in (0,1]");
    }
    const auto n = values.size();
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                     values.end());
    return values[rank - 1];
}

UtilizationHistory::UtilizationHistory(double window_s, std::size_t node_count)
    : window_s_(window_s)
    , node_count_(node_count) {
    if (!(window_s > 0.0)) {
        throw std::invalid_argument("utilization history window must be > 0");
    }
}

void UtilizationHistory::append(double timestamp, std::span<const double> node_utils) {
    if (node_utils.size() != node_count_) {
        throw std::invalid_argument("utilization sample has the wrong node count");
    }
    if (!samples_.empty() && timestamp < samples_.back().timestamp) {
        throw std::invalid_argument("utilization history must be time-ordered");
    }
    samples_.push_back({timestamp, {node_utils.begin(), node_utils.end()}});
    while (samples_.front().timestamp < timestamp - window_s_) {
        samples_.pop_front();
    }
}

double UtilizationHistory::p95(std::size_t node) const {
    if (node >= node_count_) {
        throw std::out_of_range("utilization history: node " + std::to_string(node));
    }
    std::vector<double> v;
    v.reserve(samples_.size());
    for (const auto& s : samples_) {
        v.push_back(s.utils[node]);
    }
    return nearest_rank_percentile(std::move(v), 0.95);
}

} // namespace numaopt::policy
