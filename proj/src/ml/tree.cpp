#include <numaopt/ml/tree.hpp>

#include <numaopt/kernels/kernels.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace numaopt::ml {

RegressionTree::RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) {
        throw std::invalid_argument("regression tree needs at least one node");
    }
    const auto n = static_cast<int>(nodes_.size());
    for (const auto& node : nodes_) {
        if (node.is_leaf()) {
            continue;
        }
        if (node.feature >= static_cast<int>(kFeatureCount) || node.left <= 0 ||
            node.right <= 0 || node.left >= n || node.right >= n) {
            throw std::invalid_argument("regression tree has a malformed split node");
        }
    }
}

double RegressionTree::predict(const std::array<double, kFeatureCount>& x) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const Node& n = nodes_[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold
                                         ? n.left
                                         : n.right);
    }
    return nodes_[i].value;
}

std::size_t RegressionTree::split_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return !n.is_leaf(); }));
}

std::size_t RegressionTree::depth() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t best = 0;
    // Children are always stored after their parent.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (!n.is_leaf()) {
            d[static_cast<std::size_t>(n.left)] = d[i] + 1;
            d[static_cast<std::size_t>(n.right)] = d[i] + 1;
            best = std::max(best, d[i] + 1);
        }
    }
    return best;
}

FeatureMatrix::FeatureMatrix(std::span<const TrainingSample> samples) : rows_(samples.size()) {
    if (rows_ > UINT32_MAX) {
        throw std::invalid_argument("feature matrix too large");
    }
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        auto& col = columns_[f];
        col.resize(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            col[r] = samples[r].features[f];
        }
        auto& order = sorted_[f];
        order.resize(rows_);
        std::iota(order.begin(), order.end(), std::uint32_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }
}

namespace {

// Relative floor below which a gain is treated as rounding noise.
constexpr double kGainTolerance = 1e-12;

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class Grower {
public:
    Grower(const FeatureMatrix& x, std::span<const double> targets, const TreeParams& params,
           std::array<double, kFeatureCount>& importance)
        : x_(x)
        , y_(targets)
        , params_(params)
        , importance_(importance) {}

    RegressionTree grow(std::span<const std::uint32_t> row_weight) {
        // One entry per (row, copy); each feature keeps its own sorted entry list.
        std::array<std::vector<std::uint32_t>, kFeatureCount> lists;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            for (std::uint32_t r : x_.sorted(f)) {
                for (std::uint32_t c = 0; c < row_weight[r]; ++c) {
                    lists[f].push_back(r);
                }
            }
        }
        if (lists[0].empty()) {
            throw std::invalid_argument("grow_tree: empty sample");
        }
        nodes_.clear();
        nodes_.emplace_back();
        build(0, lists, 0);
        return RegressionTree{std::move(nodes_)};
    }

private:
    void build(std::size_t node_index, std::array<std::vector<std::uint32_t>, kFeatureCount>& lists,
               std::size_t depth) {
        const auto& rows = lists[0];
        const std::size_t n = rows.size();
        double sum = 0.0, sumsq = 0.0, offset_sum = 0.0;
        const double y0 = y_[rows.front()];
        for (std::uint32_t r : rows) {
            sum += y_[r];
            sumsq += y_[r] * y_[r];
            offset_sum += y_[r] - y0;
        }
        // Offset by the first value so identical targets give an exact mean.
        const double mean = y0 + offset_sum / static_cast<double>(n);

        Split best;
        if (depth < params_.max_depth && n >= 2 * params_.min_samples_leaf && n >= 2) {
            best = find_split(lists, sum);
        }
        if (best.feature < 0 || !(best.gain > kGainTolerance * sumsq)) {
            nodes_[node_index].value = mean;
            return;
        }
        importance_[static_cast<std::size_t>(best.feature)] += best.gain;

        const auto& col = x_.column(static_cast<std::size_t>(best.feature));
        std::array<std::vector<std::uint32_t>, kFeatureCount> left, right;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            for (std::uint32_t r : lists[f]) {
                (col[r] <= best.threshold ? left[f] : right[f]).push_back(r);
            }
            lists[f].clear();
            lists[f].shrink_to_fit();
        }
        const auto li = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        const auto ri = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[node_index].feature = best.feature;
        nodes_[node_index].threshold = best.threshold;
        nodes_[node_index].left = li;
        nodes_[node_index].right = ri;
        build(static_cast<std::size_t>(li), left, depth + 1);
        build(static_cast<std::size_t>(ri), right, depth + 1);
    }

    Split find_split(const std::array<std::vector<std::uint32_t>, kFeatureCount>& lists,
                     double total) {
        const std::size_t n = lists[0].size();
        const std::size_t leaf = std::max<std::size_t>(params_.min_samples_leaf, 1);
        const double count = static_cast<double>(n);
        const double parent = total * total / count;
        // Candidate cut after position i, i in [leaf-1, n-leaf-1].
        const std::size_t lo = leaf - 1;
        const std::size_t m = n - 2 * leaf + 1;

        Split best;
        prefix_sum_.resize(m);
        prefix_count_.resize(m);
        gains_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            prefix_count_[i] = static_cast<double>(lo + i + 1);
        }
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const auto& list = lists[f];
            const auto& col = x_.column(f);
            double run = 0.0;
            for (std::size_t i = 0; i < lo; ++i) {
                run += y_[list[i]];
            }
            for (std::size_t i = 0; i < m; ++i) {
                run += y_[list[lo + i]];
                prefix_sum_[i] = run;
            }
            kernels::split_gains(prefix_sum_, prefix_count_, total, count, gains_);
            for (std::size_t i = 0; i < m; ++i) {
                const double a = col[list[lo + i]];
                const double b = col[list[lo + i + 1]];
                if (!(a < b)) {
                    continue;
                }
                const double gain = gains_[i] - parent;
                if (gain > best.gain) {
                    double t = a + (b - a) * 0.5;
                    if (!(t < b)) {
                        t = a;
                    }
                    best = Split{static_cast<int>(f), t, gain};
                }
            }
        }
        return best;
    }

    const FeatureMatrix& x_;
    std::span<const double> y_;
    const TreeParams& params_;
    std::array<double, kFeatureCount>& importance_;
    std::vector<RegressionTree::Node> nodes_;
    std::vector<double> prefix_sum_, prefix_count_, gains_;
};

} // namespace

RegressionTree grow_tree(const FeatureMatrix& x, std::span<const double> targets,
                         std::span<const std::uint32_t> row_weight, const TreeParams& params,
                         std::array<double, kFeatureCount>& importance) {
    if (targets.size() != x.rows() || row_weight.size() != x.rows()) {
        throw std::invalid_argument("grow_tree: targets/weights do not match the feature matrix");
    }
    if (params.max_depth < 1) {
        throw std::invalid_argument("grow_tree: max_depth must be >= 1");
    }
    Grower g{x, targets, params, importance};
    return g.grow(row_weight);
}

} // namespace numaopt::ml
