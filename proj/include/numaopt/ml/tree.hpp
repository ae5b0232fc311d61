#pragma once

#include <numaopt/ml/dataset.hpp>

#include <array>
#include <cstddef>
#include <vector>

namespace numaopt::ml {

/// Axis-aligned regression tree stored as a flat node array (root at 0).
/// A sample goes left when x[feature] <= threshold.
class RegressionTree {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;  // leaf value

        bool is_leaf() const noexcept { return feature < 0; }
        bool operator==(const Node&) const = default;
    };

    RegressionTree() = default;
    explicit RegressionTree(std::vector<Node> nodes);

    double predict(const std::array<double, kFeatureCount>& x) const;
    double predict(const FeatureVector& f) const { return predict(f.as_array()); }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t split_count() const noexcept;
    std::size_t depth() const;

    bool operator==(const RegressionTree&) const = default;

private:
    std::vector<Node> nodes_;
};

struct TreeParams {
    std::size_t max_depth = 3;
    std::size_t min_samples_leaf = 1;
};

/// Column-major feature matrix with each column's row order presorted once,
/// so trees can be grown on many row subsets without re-sorting.
class FeatureMatrix {
public:
    explicit FeatureMatrix(std::span<const TrainingSample> samples);

    std::size_t rows() const noexcept { return rows_; }
    const std::vector<double>& column(std::size_t f) const { return columns_.at(f); }
    /// Row indices sorted by column f ascending (ties by row index).
    const std::vector<std::uint32_t>& sorted(std::size_t f) const { return sorted_.at(f); }

private:
    std::size_t rows_ = 0;
    std::array<std::vector<double>, kFeatureCount> columns_;
    std::array<std::vector<std::uint32_t>, kFeatureCount> sorted_;
};

/// Exact greedy least-squares tree on `targets`. `row_weight[r]` is how many
/// times row r is in the sample (0 = excluded, >1 for bootstrap duplicates).
/// Split gains (squared-error reduction) are added to `importance`.
RegressionTree grow_tree(const FeatureMatrix& x, std::span<const double> targets,
                         std::span<const std::uint32_t> row_weight, const TreeParams& params,
                         std::array<double, kFeatureCount>& importance);

} // namespace numaopt::ml
