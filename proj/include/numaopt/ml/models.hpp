#pragma once

#include <numaopt/ml/tree.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace numaopt::ml {

struct HyperParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 3;
    double learning_rate = 0.1;
    std::size_t min_samples_leaf = 5;
    double subsample = 1.0;

    /// Throws std::invalid_argument naming the field.
    void validate() const;
    bool operator==(const HyperParams&) const = default;
};

using Importances = std::array<double, kFeatureCount>;

struct GbtModel {
    double base_prediction = 0.0;
    HyperParams hyperparams;
    std::vector<RegressionTree> trees;
    Importances importances{};
    std::vector<double> train_loss;  // mean squared error after each stage; [0] = base only

    /// base + learning_rate * sum of the first `stages` trees (all by default).
    double predict(const FeatureVector& f, std::size_t stages = SIZE_MAX) const;
};

/// Stage-wise least-squares gradient boosting. Rows are subsampled without
/// replacement per stage when subsample < 1.
GbtModel train_gbt(std::span<const TrainingSample> train, const HyperParams& hp,
                   std::uint64_t seed);

struct ForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 12;
    std::size_t min_samples_leaf = 1;
};

struct ForestModel {
    ForestParams params;
    std::vector<RegressionTree> trees;
    Importances importances{};

    double predict(const FeatureVector& f) const;
};

/// Bootstrap-aggregated regression trees, every split searching all features.
ForestModel train_forest(std::span<const TrainingSample> train, const ForestParams& params,
                         std::uint64_t seed);

struct LinearModel {
    std::array<double, kFeatureCount> coefficients{};
    double intercept = 0.0;
    bool ridge_fallback = false;  // design matrix was rank deficient

    double predict(const FeatureVector& f) const;
};

/// Ordinary least squares with intercept. Needs >= 5 samples. A rank
/// deficient design is solved with ridge penalty 1e-6 and flagged.
LinearModel train_linear(std::span<const TrainingSample> train);

struct ImportanceReport {
    Importances values{};
    bool degenerate = false;  // no splits: uniform 0.25
};

/// Squared-error reduction per feature, normalized to sum 1.
ImportanceReport feature_importance(const GbtModel& model);

} // namespace numaopt::ml
