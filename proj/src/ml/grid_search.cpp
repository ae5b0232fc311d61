#include <numaopt/ml/grid_search.hpp>

#include <numaopt/common/rng.hpp>
#include <numaopt/ml/dataset.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace numaopt::ml {

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

std::size_t HyperGrid::size() const noexcept {
    return n_trees.size() * max_depth.size() * learning_rate.size() * min_samples_leaf.size() *
           subsample.size();
}

std::vector<HyperParams> HyperGrid::points() const {
    std::vector<HyperParams> out;
    for (auto t : sorted_unique(n_trees))
        for (auto d : sorted_unique(max_depth))
            for (auto lr : sorted_unique(learning_rate))
                for (auto leaf : sorted_unique(min_samples_leaf))
                    for (auto sub : sorted_unique(subsample)) {
                        HyperParams hp{t, d, lr, leaf, sub};
                        hp.validate();
                        out.push_back(hp);
                    }
    return out;
}

GridSearchResult grid_search_scored(std::span<const TrainingSample> train, const HyperGrid& grid,
                                    std::size_t folds, std::uint64_t seed) {
    const auto points = grid.points();
    if (points.empty()) {
        throw std::invalid_argument("grid_search: empty grid");
    }
    const std::size_t n = train.size();
    const auto fold = fold_assignment(n, folds, derive_seed(seed, "cv-folds"));

    // The first k stages of a boosted model do not depend on how many stages
    // follow, so each (depth, lr, leaf, subsample) group trains once with the
    // largest tree count and is scored at every requested prefix.
    using Key = std::tuple<std::size_t, double, std::size_t, double>;
    std::map<Key, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        groups[{p.max_depth, p.learning_rate, p.min_samples_leaf, p.subsample}].push_back(i);
    }
    std::vector<double> abs_err(points.size(), 0.0);

    for (std::size_t k = 0; k < folds; ++k) {
        Dataset fit, held;
        for (std::size_t i = 0; i < n; ++i) {
            (fold[i] == k ? held : fit).push_back(train[i]);
        }
        for (const auto& [key, members] : groups) {
            HyperParams hp = points[members.front()];
            for (std::size_t m : members) {
                hp.n_trees = std::max(hp.n_trees, points[m].n_trees);
            }
            const GbtModel model = train_gbt(fit, hp, derive_seed(seed, "cv-train", k));
            for (const auto& s : held) {
                for (std::size_t m : members) {
                    abs_err[m] += std::abs(model.predict(s.features, points[m].n_trees) - s.label);
                }
            }
        }
    }

    GridSearchResult out;
    std::size_t best = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double mae = abs_err[i] / static_cast<double>(n);
        out.scores.push_back(GridScore{points[i], mae});
        if (mae < out.scores[best].cv_mae) {
            best = i;
        }
    }
    out.best = points[best];
    return out;
}

HyperParams grid_search(std::span<const TrainingSample> train, const HyperGrid& grid,
                        std::size_t folds, std::uint64_t seed) {
    return grid_search_scored(train, grid, folds, seed).best;
}

} // namespace numaopt::ml
