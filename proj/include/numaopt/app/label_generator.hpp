#pragma once

#include <numaopt/app/experiment_spec.hpp>
#include <numaopt/ml/dataset.hpp>

#include <cstdint>

namespace numaopt::app {

struct LabelBatch {
    ml::Dataset samples;
    std::size_t skipped = 0;  // simulations that failed
};

/// Randomized target profiles, each labeled by paired simulation next to
/// fixed bandwidth-heavy neighbours bound to every node. Features come from
/// the unbound run's steady state. Sample i depends only on (seed, i).
LabelBatch generate_labels(const TopologySpec& topology, const LabelSpec& spec, std::size_t n,
                           std::uint64_t seed);

/// One labeled sample for a given profile and migration probability.
ml::TrainingSample label_profile(const cluster::ServiceProfile& profile,
                                 const TopologySpec& topology, const LabelSpec& spec,
                                 double migration_prob, std::uint64_t seed);

} // namespace numaopt::app
