#pragma once

#include <numaopt/ml/evaluate.hpp>
#include <numaopt/ml/models.hpp>

#include <json.hpp>

namespace numaopt::ml {

nlohmann::json to_json(const HyperParams& hp);
HyperParams hyperparams_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RegressionTree& tree);
RegressionTree tree_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GbtModel& model);
GbtModel gbt_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ForestModel& model);
ForestModel forest_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LinearModel& model);
LinearModel linear_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json importances_json(const ImportanceReport& report);

} // namespace numaopt::ml
