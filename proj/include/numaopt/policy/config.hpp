#pragma once

#include <string>

namespace numaopt::policy {

enum class Strategy { A, B };

std::string to_string(Strategy s);
/// "A" or "B"; throws std::invalid_argument otherwise.
Strategy parse_strategy(const std::string& text);

struct PolicyConfig {
    Strategy strategy = Strategy::A;
    double node_util_hot = 0.80;
    double imbalance_band = 0.10;
    double quota_over = 1.00;
    double p95_window_s = 24.0 * 3600.0;
    double rebind_cool = 0.60;
    double min_predicted_improvement = 0.02;

    /// Throws std::invalid_argument naming the field.
    void validate() const;
};

} // namespace numaopt::policy
