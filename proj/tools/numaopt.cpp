// numaopt: NUMA binding experiment runner.
#include <numaopt/app/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace numaopt::app;

    CLI::App app{"NUMA binding pipeline: simulate, label, train, evaluate, compare-strategies, report"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommandOptions opts;
    std::string config, out, strategy, labels, model;
    std::uint64_t seed = 0;
    std::size_t samples = 0;

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"simulate", "run the configured cluster under the control loop; write metrics/actions/features"},
        {"label", "generate paired-simulation training labels"},
        {"train", "split, grid-search and train GBT, forest and linear models"},
        {"evaluate", "evaluate a saved model on a labels CSV"},
        {"compare-strategies", "run the configured cluster under unbind strategies A and B"},
        {"report", "baseline vs optimized run summary"},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config, "experiment JSON");
        sub->add_option("--seed", seed, "top-level seed (overrides the config)");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--samples", samples, "number of label samples");
        sub->add_option("--strategy", strategy, "unbind strategy A or B");
        sub->add_option("--labels", labels, "labels CSV (train/evaluate/report)");
        sub->add_option("--model", model, "GBT model JSON (rebind predictions, evaluate)");
        sub->add_flag("--quiet", opts.quiet, "suppress progress output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--config")) opts.config = config;
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--out")) opts.out = out;
    if (sub->count("--samples")) opts.samples = samples;
    if (sub->count("--strategy")) opts.strategy = strategy;
    if (sub->count("--labels")) opts.labels = labels;
    if (sub->count("--model")) opts.model = model;
    return run_command(sub->get_name(), opts, std::cout, std::cerr);
}
