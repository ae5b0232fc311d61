#pragma once

#include <numaopt/metrics/features.hpp>

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace numaopt::ml {

using metrics::FeatureVector;
using metrics::kFeatureCount;

struct TrainingSample {
    FeatureVector features;
    double label = 0.0;  // latency improvement from binding, as a fraction
    std::string source_id;

    void validate() const;
};

using Dataset = std::vector<TrainingSample>;

/// Seeded shuffle, then the first round(n * train_fraction) samples (at least
/// one on each side) become the training set.
std::pair<Dataset, Dataset> split_dataset(std::span<const TrainingSample> samples,
                                          double train_fraction, std::uint64_t seed);

/// Fold id per sample (0..folds-1), balanced, seeded shuffle.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed);

/// Columns: source_id,mbw,msr,npmr,rmbr,label
void write_labels_csv(std::ostream& out, std::span<const TrainingSample> samples);
/// Throws csv::ParseError naming the row.
Dataset read_labels_csv(std::istream& in);

} // namespace numaopt::ml
