#pragma once

#include <numaopt/ml/models.hpp>

#include <functional>
#include <string>
#include <vector>

namespace numaopt::ml {

struct EvalReport {
    std::string model_name;
    double mae = 0.0;
    double r2 = 0.0;
    std::vector<double> per_sample_errors;  // prediction - label
};

/// r2 when the test labels are constant but the predictions are not.
inline constexpr double kR2Undefined = -1e9;

using Predictor = std::function<double(const FeatureVector&)>;

/// Throws std::invalid_argument on an empty test set.
EvalReport evaluate(const Predictor& predict, std::span<const TrainingSample> test,
                    std::string model_name);
EvalReport evaluate(const GbtModel& model, std::span<const TrainingSample> test);
EvalReport evaluate(const ForestModel& model, std::span<const TrainingSample> test);
EvalReport evaluate(const LinearModel& model, std::span<const TrainingSample> test);

/// mae and r2 from paired predictions/labels.
EvalReport score(std::span<const double> predictions, std::span<const double> labels,
                 std::string model_name);

} // namespace numaopt::ml
