#pragma once

#include <numaopt/app/experiment_spec.hpp>
#include <numaopt/policy/optimizer.hpp>
#include <numaopt/policy/unbind_ratio.hpp>
#include <numaopt/sim/simulator.hpp>

#include <optional>
#include <vector>

namespace numaopt::app {

struct RunOptions {
    bool optimize = true;           // false: everything unbound, no control loop
    policy::Strategy strategy = policy::Strategy::A;
    policy::ImprovementPredictor predictor;  // empty: never rebind
};

struct RunSummary {
    double mean_cpi = 0.0;         // latency proxy: mean window CPI over all container windows
    double mean_ipc = 0.0;
    double mean_locality = 0.0;
    double cpu_cycles = 0.0;       // total unhalted cycles
    double unbind_ratio = 0.0;
    double instance_time = 0.0;    // container count x duration
    std::size_t unbind_actions = 0;
    std::size_t bind_actions = 0;
};

struct RunResult {
    sim::MetricsLog metrics;
    std::vector<policy::ActionRecord> actions;  // Bind/Unbind only
    RunSummary summary;
};

/// Deterministic end-to-end run of an experiment: placement, simulation and, when
/// optimizing, the control loop every optimizer_interval_s.
RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options);

/// Latency-proxy summary of a metrics log.
RunSummary summarize(const sim::MetricsLog& log, const cluster::ServiceCatalog& catalog);

} // namespace numaopt::app
