#include <numaopt/app/commands.hpp>

#include <numaopt/app/experiment_spec.hpp>
#include <numaopt/app/label_generator.hpp>
#include <numaopt/app/runner.hpp>
#include <numaopt/common/csv.hpp>
#include <numaopt/common/rng.hpp>
#include <numaopt/kernels/kernels.hpp>
#include <numaopt/metrics/metrics_csv.hpp>
#include <numaopt/ml/evaluate.hpp>
#include <numaopt/ml/grid_search.hpp>
#include <numaopt/ml/model_io.hpp>
#include <numaopt/policy/deployment.hpp>

#include <filesystem>
#include <fstream>
#include <map>

namespace numaopt::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Resolved inputs shared by every command.
struct Context {
    Context(std::string name, const CommandOptions& o, std::ostream& l)
        : command(std::move(name))
        , opts(o)
        , log(l) {}

    std::string command;
    const CommandOptions& opts;
    std::ostream& log;
    json raw = json::object();
    ExperimentSpec spec;
    fs::path out;
    std::vector<std::string> files;

    void say(const std::string& msg) const {
        if (!opts.quiet) {
            log << msg << '\n';
        }
    }

    std::ofstream create(const std::string& name) {
        std::ofstream f(out / name, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write " + (out / name).string());
        }
        files.push_back(name);
        return f;
    }

    void write_json(const std::string& name, const json& j) { create(name) << j.dump(2) << '\n'; }

    void manifest(json extra = json::object()) {
        json m = {{"command", command},
                  {"seed", spec.seed},
                  {"config_hash", config_hash(raw)},
                  {"version", kVersion},
                  {"kernel_backend", kernels::backend_name(kernels::active_backend())}};
        m["files"] = files;
        for (auto it = extra.begin(); it != extra.end(); ++it) {
            m[it.key()] = it.value();
        }
        std::ofstream f(out / (command + ".manifest.json"), std::ios::binary | std::ios::trunc);
        f << m.dump(2) << '\n';
    }
};

Context make_context(const std::string& name, const CommandOptions& opts, std::ostream& log,
                     bool config_required) {
    Context ctx(name, opts, log);
    if (opts.config) {
        ctx.raw = load_json(*opts.config);
        ctx.spec = parse_spec(ctx.raw);
    } else if (config_required) {
        throw ConfigError("--config is required for '" + name + "'");
    }
    if (opts.seed) {
        ctx.spec.seed = *opts.seed;
    }
    if (opts.strategy) {
        try {
            ctx.spec.policy.strategy = policy::parse_strategy(*opts.strategy);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string{"--strategy: "} + e.what());
        }
    }
    if (opts.samples) {
        if (*opts.samples < 1) {
            throw ConfigError("--samples must be >= 1");
        }
        ctx.spec.labels.samples = *opts.samples;
    }
    ctx.out = opts.out ? fs::path{*opts.out} : fs::path{ctx.spec.output_dir};
    fs::create_directories(ctx.out);
    return ctx;
}

ml::Dataset read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(path + ": cannot open labels");
    }
    try {
        return ml::read_labels_csv(in);
    } catch (const csv::ParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(path + ": cannot open");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

policy::ImprovementPredictor load_predictor(const std::optional<std::string>& path) {
    if (!path) {
        return {};
    }
    auto model = std::make_shared<ml::GbtModel>(ml::gbt_from_json(read_json_file(*path)));
    return [model](const metrics::FeatureVector& f) { return model->predict(f); };
}

json summary_json(const RunSummary& s) {
    return {{"mean_cpi", s.mean_cpi},
            {"mean_ipc", s.mean_ipc},
            {"mean_locality", s.mean_locality},
            {"cpu_cycles", s.cpu_cycles},
            {"unbind_ratio", s.unbind_ratio},
            {"instance_time_s", s.instance_time},
            {"unbind_actions", s.unbind_actions},
            {"bind_actions", s.bind_actions}};
}

void write_actions(Context& ctx, const std::string& name,
                   const std::vector<policy::ActionRecord>& actions) {
    auto f = ctx.create(name);
    policy::write_actions_csv(f, actions);
}

void write_metrics(Context& ctx, const std::string& name, const sim::MetricsLog& log) {
    auto f = ctx.create(name);
    metrics::write_metrics_csv(f, log);
}

int cmd_simulate(Context& ctx) {
    RunOptions opts;
    opts.strategy = ctx.spec.policy.strategy;
    opts.predictor = load_predictor(ctx.opts.model);
    ctx.say("simulating " + std::to_string(ctx.spec.services.size()) + " services, strategy " +
            policy::to_string(opts.strategy));
    const RunResult r = run_experiment(ctx.spec, opts);
    write_metrics(ctx, "metrics.csv", r.metrics);
    write_actions(ctx, "actions.csv", r.actions);
    {
        auto f = ctx.create("features.csv");
        metrics::write_features_csv(f, metrics::service_features(r.metrics));
    }
    ctx.manifest({{"strategy", policy::to_string(opts.strategy)},
                  {"summary", summary_json(r.summary)}});
    ctx.say("wrote " + std::to_string(r.metrics.size()) + " metric windows to " + ctx.out.string());
    return kExitOk;
}

int cmd_label(Context& ctx) {
    const std::size_t n = ctx.spec.labels.samples;
    ctx.say("labeling " + std::to_string(n) + " samples");
    const LabelBatch batch =
        generate_labels(ctx.spec.topology, ctx.spec.labels, n, derive_seed(ctx.spec.seed, "labels"));
    {
        auto f = ctx.create("labels.csv");
        ml::write_labels_csv(f, batch.samples);
    }
    ctx.manifest({{"requested", n}, {"written", batch.samples.size()}, {"skipped", batch.skipped}});
    ctx.say("wrote " + std::to_string(batch.samples.size()) + " samples (" +
            std::to_string(batch.skipped) + " skipped)");
    return kExitOk;
}

std::string labels_path(const Context& ctx) {
    return ctx.opts.labels ? *ctx.opts.labels : (ctx.out / "labels.csv").string();
}

int cmd_train(Context& ctx) {
    const auto data = read_labels(labels_path(ctx));
    const auto& t = ctx.spec.train;
    const auto [train, test] = ml::split_dataset(data, t.train_fraction, derive_seed(ctx.spec.seed, "split"));
    ctx.say("split " + std::to_string(train.size()) + "/" + std::to_string(test.size()) +
            ", grid of " + std::to_string(t.grid.size()) + " points");

    const auto search = ml::grid_search_scored(train, t.grid, t.folds, derive_seed(ctx.spec.seed, "grid"));
    const auto gbt = ml::train_gbt(train, search.best, derive_seed(ctx.spec.seed, "gbt"));
    const auto forest = ml::train_forest(train, t.forest, derive_seed(ctx.spec.seed, "forest"));
    const auto linear = ml::train_linear(train);

    const auto e_gbt = ml::evaluate(gbt, test);
    const auto e_forest = ml::evaluate(forest, test);
    const auto e_linear = ml::evaluate(linear, test);
    const auto importance = ml::feature_importance(gbt);

    ctx.write_json("model_gbt.json", ml::to_json(gbt));
    ctx.write_json("model_forest.json", ml::to_json(forest));
    ctx.write_json("model_linear.json", ml::to_json(linear));
    json grid = json::array();
    for (const auto& s : search.scores) {
        grid.push_back({{"params", ml::to_json(s.params)}, {"cv_mae", s.cv_mae}});
    }
    ctx.write_json("eval.json", {{"train_size", train.size()},
                                 {"test_size", test.size()},
                                 {"best_hyperparams", ml::to_json(search.best)},
                                 {"grid", grid},
                                 {"gbt", ml::to_json(e_gbt)},
                                 {"forest", ml::to_json(e_forest)},
                                 {"linear", ml::to_json(e_linear)},
                                 {"linear_ridge_fallback", linear.ridge_fallback},
                                 {"importances", ml::importances_json(importance)}});
    ctx.manifest();
    for (const auto* e : {&e_gbt, &e_forest, &e_linear}) {
        ctx.say(e->model_name + ": mae " + csv::format_double(e->mae) + " r2 " +
                csv::format_double(e->r2));
    }
    return kExitOk;
}

int cmd_evaluate(Context& ctx) {
    if (!ctx.opts.model) {
        throw ConfigError("--model is required for 'evaluate'");
    }
    const auto data = read_labels(labels_path(ctx));
    const json j = read_json_file(*ctx.opts.model);
    const std::string kind = j.value("kind", "");
    ml::EvalReport report;
    if (kind == "gbt") {
        report = ml::evaluate(ml::gbt_from_json(j), data);
    } else if (kind == "forest") {
        report = ml::evaluate(ml::forest_from_json(j), data);
    } else if (kind == "linear") {
        report = ml::evaluate(ml::linear_from_json(j), data);
    } else {
        throw std::runtime_error(*ctx.opts.model + ": unknown model kind '" + kind + "'");
    }
    ctx.write_json("evaluation_" + kind + ".json", ml::to_json(report));
    ctx.manifest();
    ctx.say(kind + ": mae " + csv::format_double(report.mae) + " r2 " + csv::format_double(report.r2));
    return kExitOk;
}

int cmd_compare(Context& ctx) {
    const auto predictor = load_predictor(ctx.opts.model);
    json runs = json::object();
    std::map<std::string, RunSummary> summaries;
    for (const auto strategy : {policy::Strategy::A, policy::Strategy::B}) {
        const std::string name = policy::to_string(strategy);
        ctx.say("running strategy " + name);
        const RunResult r = run_experiment(ctx.spec, {true, strategy, predictor});
        write_actions(ctx, "actions_" + name + ".csv", r.actions);
        write_metrics(ctx, "metrics_" + name + ".csv", r.metrics);
        runs[name] = summary_json(r.summary);
        summaries[name] = r.summary;
    }
    const auto& a = summaries["A"];
    const auto& b = summaries["B"];
    json report = {{"A", runs["A"]}, {"B", runs["B"]}};
    report["unbind_ratio_B_over_A"] = a.unbind_ratio > 0.0 ? json(b.unbind_ratio / a.unbind_ratio) : json(nullptr);
    report["latency_B_over_A"] = a.mean_cpi > 0.0 ? json(b.mean_cpi / a.mean_cpi) : json(nullptr);
    ctx.write_json("compare.json", report);
    ctx.manifest();
    ctx.say("unbind ratio A " + csv::format_double(a.unbind_ratio) + ", B " +
            csv::format_double(b.unbind_ratio));
    return kExitOk;
}

int cmd_report(Context& ctx) {
    const auto catalog = ctx.spec.catalog();
    const auto predictor = load_predictor(ctx.opts.model);
    ctx.say("running baseline (unbound)");
    const RunResult base = run_experiment(ctx.spec, {false, ctx.spec.policy.strategy, {}});
    ctx.say("running optimized (strategy " + policy::to_string(ctx.spec.policy.strategy) + ")");
    const RunResult mao = run_experiment(ctx.spec, {true, ctx.spec.policy.strategy, predictor});
    write_metrics(ctx, "metrics_baseline.csv", base.metrics);
    write_metrics(ctx, "metrics_optimized.csv", mao.metrics);
    write_actions(ctx, "actions.csv", mao.actions);

    json report;
    report["baseline"] = summary_json(base.summary);
    report["optimized"] = summary_json(mao.summary);
    const auto& b = base.summary;
    const auto& m = mao.summary;
    report["latency_improvement"] = b.mean_cpi > 0.0 ? (b.mean_cpi - m.mean_cpi) / b.mean_cpi : 0.0;
    {
        // CPU-time saving at equal work: pair windows by (container, start)
        // and weight each CPI by the cores in use.
        std::map<std::pair<std::string, double>, double> base_cpi;
        for (const auto& s : base.metrics) {
            base_cpi[{s.container_id, s.window_start}] =
                metrics::window_cpi(s, cluster::profile_of(catalog, s.service_id).compute_cpi);
        }
        double before = 0.0, after = 0.0;
        for (const auto& s : mao.metrics) {
            auto it = base_cpi.find({s.container_id, s.window_start});
            if (it == base_cpi.end()) {
                continue;
            }
            const double cores = s.cpu_util * cluster::profile_of(catalog, s.service_id).cpu_quota;
            before += cores * it->second;
            after += cores * metrics::window_cpi(s, cluster::profile_of(catalog, s.service_id).compute_cpi);
        }
        report["cpu_saving_proxy"] = before > 0.0 ? (before - after) / before : 0.0;
    }
    report["locality"] = {{"before", b.mean_locality}, {"after", m.mean_locality}};
    report["ipc"] = {{"before", b.mean_ipc}, {"after", m.mean_ipc}};
    report["unbind_ratio"] = m.unbind_ratio;

    if (ctx.opts.model) {
        const auto gbt = ml::gbt_from_json(read_json_file(*ctx.opts.model));
        report["importances"] = ml::importances_json(ml::feature_importance(gbt));
        if (ctx.opts.labels) {
            report["evaluation"] = ml::to_json(ml::evaluate(gbt, read_labels(*ctx.opts.labels)));
        }
        // Deployment plan from the baseline's service-level features.
        std::map<std::string, std::pair<metrics::FeatureVector, std::size_t>> acc;
        for (const auto& r : metrics::service_features(base.metrics)) {
            auto& [f, n] = acc[r.service_id];
            f.mbw += r.features.mbw;
            f.msr += r.features.msr;
            f.npmr += r.features.npmr;
            f.rmbr += r.features.rmbr;
            ++n;
        }
        std::map<std::string, double> predictions;
        for (auto& [id, fn] : acc) {
            auto& [f, n] = fn;
            const auto k = static_cast<double>(n);
            predictions[id] = gbt.predict({f.mbw / k, f.msr / k, f.npmr / k, f.rmbr / k});
        }
        if (!predictions.empty()) {
            ctx.write_json("plan.json", policy::to_json(policy::select_top_services(
                                            predictions, ctx.spec.deploy_top_k, ctx.spec.policy)));
        }
    }
    ctx.write_json("report.json", report);
    ctx.manifest();
    ctx.say("latency improvement " + csv::format_double(report["latency_improvement"].get<double>()));
    return kExitOk;
}

} // namespace

int run_command(const std::string& name, const CommandOptions& options, std::ostream& log,
                std::ostream& err) {
    static const std::map<std::string, std::pair<int (*)(Context&), bool>> table = {
        {"simulate", {cmd_simulate, true}},
        {"label", {cmd_label, false}},
        {"train", {cmd_train, false}},
        {"evaluate", {cmd_evaluate, false}},
        {"compare-strategies", {cmd_compare, true}},
        {"report", {cmd_report, true}},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        err << "error: unknown command '" << name << "'\n";
        return kExitConfig;
    }
    try {
        Context ctx = make_context(name, options, log, it->second.second);
        return it->second.first(ctx);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace numaopt::app
