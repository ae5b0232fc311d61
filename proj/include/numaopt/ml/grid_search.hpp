#pragma once

#include <numaopt/ml/models.hpp>

#include <cstdint>
#include <vector>

namespace numaopt::ml {

struct HyperGrid {
    std::vector<std::size_t> n_trees{50, 100, 200};
    std::vector<std::size_t> max_depth{2, 3, 4};
    std::vector<double> learning_rate{0.05, 0.1, 0.3};
    std::vector<std::size_t> min_samples_leaf{5, 20};
    std::vector<double> subsample{1.0};

    std::size_t size() const noexcept;
    /// Every combination, ordered by the tie-break preference: fewer trees,
    /// shallower depth, lower learning rate, smaller leaf, smaller subsample.
    std::vector<HyperParams> points() const;
};

struct GridScore {
    HyperParams params;
    double cv_mae = 0.0;
};

struct GridSearchResult {
    HyperParams best;
    std::vector<GridScore> scores;  // in points() order
};

/// k-fold cross-validated MAE over every grid point; argmin with ties going
/// to the earlier point in points() order.
GridSearchResult grid_search_scored(std::span<const TrainingSample> train, const HyperGrid& grid,
                                    std::size_t folds, std::uint64_t seed);

HyperParams grid_search(std::span<const TrainingSample> train, const HyperGrid& grid,
                        std::size_t folds, std::uint64_t seed);

} // namespace numaopt::ml
