#include <numaopt/ml/models.hpp>

#include <numaopt/common/rng.hpp>
#include <numaopt/kernels/kernels.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace numaopt::ml {

void HyperParams::validate() const {
    if (n_trees < 1) throw std::invalid_argument("hyperparams.n_trees must be >= 1");
    if (max_depth < 1) throw std::invalid_argument("hyperparams.max_depth must be >= 1");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
        throw std::invalid_argument("hyperparams.learning_rate must be in (0,1]");
    }
    if (min_samples_leaf < 1) {
        throw std::invalid_argument("hyperparams.min_samples_leaf must be >= 1");
    }
    if (!(subsample > 0.0 && subsample <= 1.0)) {
        throw std::invalid_argument("hyperparams.subsample must be in (0,1]");
    }
}

double GbtModel::predict(const FeatureVector& f, std::size_t stages) const {
    const auto x = f.as_array();
    const std::size_t k = std::min(stages, trees.size());
    double s = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        s += trees[t].predict(x);
    }
    return base_prediction + hyperparams.learning_rate * s;
}

namespace {

// Offsetting by the first value makes the mean of identical values exact.
double exact_mean(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x - v.front();
    }
    return v.front() + acc / static_cast<double>(v.size());
}

} // namespace

GbtModel train_gbt(std::span<const TrainingSample> train, const HyperParams& hp,
                   std::uint64_t seed) {
    hp.validate();
    if (train.empty()) {
        throw std::invalid_argument("train_gbt: empty training set");
    }
    for (const auto& s : train) {
        s.validate();
    }
    const std::size_t n = train.size();
    const FeatureMatrix x{train};
    std::vector<double> y(n);
    std::vector<std::array<double, kFeatureCount>> rows(n);
    for (std::size_t r = 0; r < n; ++r) {
        y[r] = train[r].label;
        rows[r] = train[r].features.as_array();
    }

    GbtModel model;
    model.hyperparams = hp;
    model.base_prediction = exact_mean(y);
    model.trees.reserve(hp.n_trees);

    std::vector<double> fitted(n, model.base_prediction);
    std::vector<double> residual(n), stage(n);
    std::vector<std::uint32_t> weight(n, 1);
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::uint32_t{0});
    const auto draw = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * hp.subsample)));
    Rng rng{derive_seed(seed, "gbt-subsample")};
    const TreeParams tree_params{hp.max_depth, hp.min_samples_leaf};
    Importances gain{};

    model.train_loss.push_back(kernels::sum_sq_diff(fitted, y) / static_cast<double>(n));
    for (std::size_t t = 0; t < hp.n_trees; ++t) {
        kernels::subtract(y, fitted, residual);
        if (draw < n) {
            // Partial Fisher-Yates: the first `draw` pool entries are the sample.
            std::fill(weight.begin(), weight.end(), 0);
            for (std::size_t i = 0; i < draw; ++i) {
                std::swap(pool[i], pool[i + rng.below(n - i)]);
                weight[pool[i]] = 1;
            }
        }
        RegressionTree tree = grow_tree(x, residual, weight, tree_params, gain);
        for (std::size_t r = 0; r < n; ++r) {
            stage[r] = tree.predict(rows[r]);
        }
        kernels::axpy(hp.learning_rate, stage, fitted);
        model.train_loss.push_back(kernels::sum_sq_diff(fitted, y) / static_cast<double>(n));
        model.trees.push_back(std::move(tree));
    }

    const double total = std::accumulate(gain.begin(), gain.end(), 0.0);
    if (total > 0.0) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            model.importances[f] = gain[f] / total;
        }
    }
    return model;
}

ImportanceReport feature_importance(const GbtModel& model) {
    ImportanceReport out;
    const double total =
        std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
    if (!(total > 0.0)) {
        out.values.fill(1.0 / static_cast<double>(kFeatureCount));
        out.degenerate = true;
        return out;
    }
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        out.values[f] = model.importances[f] / total;
    }
    return out;
}

} // namespace numaopt::ml
