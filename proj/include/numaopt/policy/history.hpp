#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace numaopt::policy {

/// Per-node utilization samples covering a sliding time window.
class UtilizationHistory {
public:
    UtilizationHistory(double window_s, std::size_t node_count);

    /// Appends one sample per node and drops samples older than
    /// `timestamp - window`. Throws std::invalid_argument if time goes backwards
    /// or the node count differs.
    void append(double timestamp, std::span<const double> node_utils);

    bool empty() const noexcept { return samples_.empty(); }
    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t node_count() const noexcept { return node_count_; }
    double window_s() const noexcept { return window_s_; }

    /// Nearest-rank 95th percentile of the node's samples in the window.
    /// Throws std::logic_error when empty.
    double p95(std::size_t node) const;

private:
    struct Sample {
        double timestamp;
        std::vector<double> utils;
    };
    double window_s_;
    std::size_t node_count_;
    std::deque<Sample> samples_;
};

/// Nearest-rank percentile (q in (0,1]) of a nonempty set of values.
double nearest_rank_percentile(std::vector<double> values, double q);

} // namespace numaopt::policy
