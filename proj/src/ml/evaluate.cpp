#include <numaopt/ml/evaluate.hpp>

#include <numaopt/kernels/kernels.hpp>

#include <stdexcept>

namespace numaopt::ml {

EvalReport score(std::span<const double> predictions, std::span<const double> labels,
                 std::string model_name) {
    if (labels.empty()) {
        throw std::invalid_argument("evaluate: empty test set");
    }
    if (predictions.size() != labels.size()) {
        throw std::invalid_argument("evaluate: prediction/label count mismatch");
    }
    const auto n = static_cast<double>(labels.size());
    EvalReport r;
    r.model_name = std::move(model_name);
    r.per_sample_errors.resize(labels.size());
    kernels::subtract(predictions, labels, r.per_sample_errors);
    r.mae = kernels::sum_abs_diff(predictions, labels) / n;

    double mean = 0.0;
    for (double y : labels) {
        mean += y - labels.front();
    }
    mean = labels.front() + mean / n;
    double ss_tot = 0.0;
    for (double y : labels) {
        ss_tot += (y - mean) * (y - mean);
    }
    const double ss_res = kernels::sum_sq_diff(predictions, labels);
    if (ss_tot > 0.0) {
        r.r2 = 1.0 - ss_res / ss_tot;
    } else {
        r.r2 = ss_res == 0.0 ? 0.0 : kR2Undefined;
    }
    return r;
}

EvalReport evaluate(const Predictor& predict, std::span<const TrainingSample> test,
                    std::string model_name) {
    std::vector<double> pred, label;
    pred.reserve(test.size());
    label.reserve(test.size());
    for (const auto& s : test) {
        pred.push_back(predict(s.features));
        label.push_back(s.label);
    }
    return score(pred, label, std::move(model_name));
}

EvalReport evaluate(const GbtModel& model, std::span<const TrainingSample> test) {
    return evaluate([&](const FeatureVector& f) { return model.predict(f); }, test, "gbt");
}

EvalReport evaluate(const ForestModel& model, std::span<const TrainingSample> test) {
    return evaluate([&](const FeatureVector& f) { return model.predict(f); }, test, "forest");
}

EvalReport evaluate(const LinearModel& model, std::span<const TrainingSample> test) {
    return evaluate([&](const FeatureVector& f) { return model.predict(f); }, test, "linear");
}

} // namespace numaopt::ml
