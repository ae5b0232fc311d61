#include <numaopt/ml/dataset.hpp>

#include <numaopt/common/csv.hpp>
#include <numaopt/common/rng.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace numaopt::ml {

void TrainingSample::validate() const {
    if (!std::isfinite(label)) {
        throw std::invalid_argument("sample '" + source_id + "': label is not finite");
    }
    features.validate();
}

namespace {

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng{seed};
    for (std::size_t i = n; i > 1; --i) {
        std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    return idx;
}

} // namespace

std::pair<Dataset, Dataset> split_dataset(std::span<const TrainingSample> samples,
                                          double train_fraction, std::uint64_t seed) {
    if (samples.size() < 2) {
        throw std::invalid_argument("split_dataset: need at least 2 samples");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("split_dataset: train_fraction must be in (0,1)");
    }
    const std::size_t n = samples.size();
    auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

    const auto order = shuffled(n, seed);
    std::pair<Dataset, Dataset> out;
    out.first.reserve(n_train);
    out.second.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
        (i < n_train ? out.first : out.second).push_back(samples[order[i]]);
    }
    return out;
}

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) {
        throw std::invalid_argument("fold_assignment: need at least 2 folds");
    }
    if (n < folds) {
        throw std::invalid_argument("fold_assignment: " + std::to_string(n) +
                                    " samples cannot fill " + std::to_string(folds) + " folds");
    }
    const auto order = shuffled(n, seed);
    std::vector<std::size_t> fold(n);
    for (std::size_t i = 0; i < n; ++i) {
        fold[order[i]] = i % folds;
    }
    return fold;
}

void write_labels_csv(std::ostream& out, std::span<const TrainingSample> samples) {
    using csv::format_double;
    out << "source_id,mbw,msr,npmr,rmbr,label\n";
    for (const auto& s : samples) {
        out << s.source_id << ',' << format_double(s.features.mbw) << ','
            << format_double(s.features.msr) << ',' << format_double(s.features.npmr) << ','
            << format_double(s.features.rmbr) << ',' << format_double(s.label) << '\n';
    }
}

Dataset read_labels_csv(std::istream& in) {
    csv::Reader reader(in, {"source_id", "mbw", "msr", "npmr", "rmbr", "label"});
    Dataset out;
    while (reader.next()) {
        TrainingSample s;
        s.source_id = reader.text("source_id");
        s.features.mbw = reader.number("mbw");
        s.features.msr = reader.number("msr");
        s.features.npmr = reader.number("npmr");
        s.features.rmbr = reader.number("rmbr");
        s.label = reader.number("label");
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw csv::ParseError(reader.row_number(), e.what());
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace numaopt::ml
