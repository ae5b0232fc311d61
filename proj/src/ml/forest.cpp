#include <numaopt/ml/models.hpp>

#include <numaopt/common/rng.hpp>

#include <numeric>
#include <stdexcept>

namespace numaopt::ml {

double ForestModel::predict(const FeatureVector& f) const {
    if (trees.empty()) {
        throw std::logic_error("forest has no trees");
    }
    const auto x = f.as_array();
    double s = 0.0;
    for (const auto& t : trees) {
        s += t.predict(x);
    }
    return s / static_cast<double>(trees.size());
}

ForestModel train_forest(std::span<const TrainingSample> train, const ForestParams& params,
                         std::uint64_t seed) {
    if (train.empty()) {
        throw std::invalid_argument("train_forest: empty training set");
    }
    if (params.n_trees < 1 || params.max_depth < 1 || params.min_samples_leaf < 1) {
        throw std::invalid_argument("train_forest: n_trees, max_depth, min_samples_leaf must be >= 1");
    }
    for (const auto& s : train) {
        s.validate();
    }
    const std::size_t n = train.size();
    const FeatureMatrix x{train};
    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) {
        y[r] = train[r].label;
    }

    ForestModel model;
    model.params = params;
    model.trees.reserve(params.n_trees);
    const TreeParams tree_params{params.max_depth, params.min_samples_leaf};
    Importances gain{};
    std::vector<std::uint32_t> weight(n);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        Rng rng{derive_seed(seed, "forest-bootstrap", t)};
        std::fill(weight.begin(), weight.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++weight[rng.below(n)];
        }
        model.trees.push_back(grow_tree(x, y, weight, tree_params, gain));
    }
    const double total = std::accumulate(gain.begin(), gain.end(), 0.0);
    if (total > 0.0) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            model.importances[f] = gain[f] / total;
        }
    }
    return model;
}

} // namespace numaopt::ml
