#include <numaopt/ml/model_io.hpp>

#include <stdexcept>

namespace numaopt::ml {

using nlohmann::json;

json to_json(const HyperParams& hp) {
    return json{{"n_trees", hp.n_trees},
                {"max_depth", hp.max_depth},
                {"learning_rate", hp.learning_rate},
                {"min_samples_leaf", hp.min_samples_leaf},
                {"subsample", hp.subsample}};
}

HyperParams hyperparams_from_json(const json& j) {
    HyperParams hp;
    hp.n_trees = j.at("n_trees").get<std::size_t>();
    hp.max_depth = j.at("max_depth").get<std::size_t>();
    hp.learning_rate = j.at("learning_rate").get<double>();
    hp.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
    hp.subsample = j.at("subsample").get<double>();
    hp.validate();
    return hp;
}

namespace {

json node_json(const std::vector<RegressionTree::Node>& nodes, std::size_t i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) {
        return json{{"leaf_value", n.value}};
    }
    return json{{"feature_index", n.feature},
                {"threshold", n.threshold},
                {"left", node_json(nodes, static_cast<std::size_t>(n.left))},
                {"right", node_json(nodes, static_cast<std::size_t>(n.right))}};
}

int node_from_json(const json& j, std::vector<RegressionTree::Node>& nodes) {
    const auto i = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (j.contains("leaf_value")) {
        nodes[static_cast<std::size_t>(i)].value = j.at("leaf_value").get<double>();
        return i;
    }
    const int feature = j.at("feature_index").get<int>();
    if (feature < 0 || feature >= static_cast<int>(kFeatureCount)) {
        throw std::invalid_argument("tree node: feature_index out of range");
    }
    const double threshold = j.at("threshold").get<double>();
    const int left = node_from_json(j.at("left"), nodes);
    const int right = node_from_json(j.at("right"), nodes);
    auto& n = nodes[static_cast<std::size_t>(i)];
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    return i;
}

json importances_object(const Importances& v) {
    json j = json::object();
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        j[std::string{metrics::kFeatureNames[f]}] = v[f];
    }
    return j;
}

Importances importances_from(const json& j) {
    Importances v{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        v[f] = j.at(std::string{metrics::kFeatureNames[f]}).get<double>();
    }
    return v;
}

void expect_kind(const json& j, const char* kind) {
    if (j.at("kind").get<std::string>() != kind) {
        throw std::invalid_argument(std::string{"model JSON is not of kind '"} + kind + "'");
    }
}

} // namespace

json to_json(const RegressionTree& tree) {
    return node_json(tree.nodes(), 0);
}

RegressionTree tree_from_json(const json& j) {
    std::vector<RegressionTree::Node> nodes;
    node_from_json(j, nodes);
    return RegressionTree{std::move(nodes)};
}

json to_json(const GbtModel& model) {
    json trees = json::array();
    for (const auto& t : model.trees) {
        trees.push_back(to_json(t));
    }
    return json{{"kind", "gbt"},
                {"base_prediction", model.base_prediction},
                {"learning_rate", model.hyperparams.learning_rate},
                {"hyperparams", to_json(model.hyperparams)},
                {"importances", importances_object(model.importances)},
                {"trees", std::move(trees)}};
}

GbtModel gbt_from_json(const json& j) {
    expect_kind(j, "gbt");
    GbtModel m;
    m.base_prediction = j.at("base_prediction").get<double>();
    m.hyperparams = hyperparams_from_json(j.at("hyperparams"));
    m.hyperparams.learning_rate = j.at("learning_rate").get<double>();
    m.importances = importances_from(j.at("importances"));
    for (const auto& t : j.at("trees")) {
        m.trees.push_back(tree_from_json(t));
    }
    return m;
}

json to_json(const ForestModel& model) {
    json trees = json::array();
    for (const auto& t : model.trees) {
        trees.push_back(to_json(t));
    }
    return json{{"kind", "forest"},
                {"params",
                 {{"n_trees", model.params.n_trees},
                  {"max_depth", model.params.max_depth},
                  {"min_samples_leaf", model.params.min_samples_leaf}}},
                {"importances", importances_object(model.importances)},
                {"trees", std::move(trees)}};
}

ForestModel forest_from_json(const json& j) {
    expect_kind(j, "forest");
    ForestModel m;
    const auto& p = j.at("params");
    m.params.n_trees = p.at("n_trees").get<std::size_t>();
    m.params.max_depth = p.at("max_depth").get<std::size_t>();
    m.params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
    m.importances = importances_from(j.at("importances"));
    for (const auto& t : j.at("trees")) {
        m.trees.push_back(tree_from_json(t));
    }
    return m;
}

json to_json(const LinearModel& model) {
    return json{{"kind", "linear"},
                {"intercept", model.intercept},
                {"coefficients", importances_object(model.coefficients)},
                {"ridge_fallback", model.ridge_fallback}};
}

LinearModel linear_from_json(const json& j) {
    expect_kind(j, "linear");
    LinearModel m;
    m.intercept = j.at("intercept").get<double>();
    m.coefficients = importances_from(j.at("coefficients"));
    m.ridge_fallback = j.at("ridge_fallback").get<bool>();
    return m;
}

json to_json(const EvalReport& report) {
    return json{{"model_name", report.model_name},
                {"mae", report.mae},
                {"r2", report.r2},
                {"per_sample_errors", report.per_sample_errors}};
}

json importances_json(const ImportanceReport& report) {
    return json{{"values", importances_object(report.values)}, {"degenerate", report.degenerate}};
}

} // namespace numaopt::ml
