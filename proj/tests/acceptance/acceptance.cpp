// Acceptance checks. One line per criterion: "C<n> PASS|FAIL <what>: <measured> [<secs> s]".
// `--criterion N` runs a single one; the exit code is nonzero if any run fails.
#include <numaopt/app/commands.hpp>
#include <numaopt/app/experiment_spec.hpp>
#include <numaopt/app/runner.hpp>
#include <numaopt/common/rng.hpp>
#include <numaopt/policy/deployment.hpp>
#include <numaopt/policy/optimizer.hpp>
#include <numaopt/policy/unbind.hpp>
#include <numaopt/sim/migration_cost.hpp>
#include <numaopt/sim/performance.hpp>
#include <numaopt/sim/simulator.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace numaopt;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

fs::path scratch(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("numaopt_acc_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

int run(const std::string& cmd, app::CommandOptions o) {
    o.quiet = true;
    std::ostringstream log;
    return app::run_command(cmd, o, log, std::cerr);
}

// ---------------------------------------------------------------------------

Outcome migration_cost_fidelity() {
    double worst_knot = 0.0;
    for (const auto& [mib, secs] : sim::kMigrationCostTable) {
        worst_knot = std::max(worst_knot, std::abs(sim::migration_cost(mib) - secs) / secs);
    }
    // midpoints between consecutive table rows, and a per-MB slope fitted to them
    std::vector<std::pair<double, double>> mids;
    for (std::size_t i = 1; i < sim::kMigrationCostTable.size(); ++i) {
        const double x = 0.5 * (sim::kMigrationCostTable[i - 1].first + sim::kMigrationCostTable[i].first);
        mids.emplace_back(x, sim::migration_cost(x));
    }
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : mids) {
        sxy += x * y;
        sxx += x * x;
    }
    const double slope = sxy / sxx;
    double worst_mid = 0.0, worst_at = 0.0;
    for (const auto& [x, y] : mids) {
        const double err = std::abs(y - slope * x) / (slope * x);
        if (err > worst_mid) {
            worst_mid = err;
            worst_at = x;
        }
    }
    return {worst_knot <= 1e-12 && worst_mid <= 0.05,
            fmt("knot rel err %.1e; per-MB fit %.4e s/MB, worst midpoint %.2f%% at %.1f MB (limit 5%%)",
                worst_knot, slope, 100 * worst_mid, worst_at)};
}

Outcome latency_constants() {
    const auto topo = cluster::build_topology(2, 24, 98304, 100, 80, 138);
    const double local = sim::effective_latency(1.0, topo, 0.0);
    const double remote = sim::effective_latency(0.0, topo, 0.0);
    const double ratio = remote / local;
    return {local == 80.0 && remote == 138.0 && std::abs(ratio - 1.725) <= 1e-6,
            fmt("local %.6f ns, remote %.6f ns, ratio %.9f", local, remote, ratio)};
}

Outcome baseline_locality() {
    sim::SimConfig cfg;
    const double warmup = 3600.0;
    cfg.duration_s = warmup + 6 * 3600.0;
    cluster::ServiceCatalog catalog;
    for (double rss : {0.9, 1.0}) {
        cluster::ServiceProfile p;
        p.service_id = rss == 1.0 ? "full" : "svc";
        p.cpu_quota = 4;
        p.mem_demand_mib = 8192;
        p.rss_ratio = rss;
        p.bw_demand_peak_gbs = 5;
        p.mem_access_intensity = 0.002;
        catalog.emplace(p.service_id, p);
    }
    const auto topo = cluster::build_topology(2, 24, 98304, 100, 80, 138);
    using cluster::BindState;
    std::vector<cluster::ContainerInstance> cs{
        cluster::make_instance("u0", "svc", "s0", topo, BindState::unbound(), 0),
        cluster::make_instance("u1", "svc", "s0", topo, BindState::unbound(), 1),
        cluster::make_instance("b0", "svc", "s0", topo, BindState::bound(0), 0),
        cluster::make_instance("b1", "full", "s0", topo, BindState::bound(1), 1)};
    sim::Simulator s(cfg, catalog, sim::builtin_load_curves(), {cluster::Server("s0", topo)}, cs);
    s.run_until(cfg.duration_s);

    double unbound = 0.0, bound_min = 1.0;
    std::size_t n = 0;
    for (const auto& m : s.metrics_log()) {
        if (m.window_start < warmup) {
            continue;
        }
        if (m.bound_node < 0) {
            unbound += m.locality;
            ++n;
        }
    }
    unbound /= static_cast<double>(n);
    // bound containers: mean over the same span, worst of the two
    for (const char* id : {"b0", "b1"}) {
        double sum = 0.0;
        std::size_t k = 0;
        for (const auto& m : s.metrics_log()) {
            if (m.window_start >= warmup && m.container_id == id) {
                sum += m.locality;
                ++k;
            }
        }
        bound_min = std::min(bound_min, sum / static_cast<double>(k));
    }
    const double gain = 100 * (bound_min - unbound);
    return {unbound >= 0.50 && unbound <= 0.65 && bound_min >= 0.90 && gain >= 15.0,
            fmt("unbound mean locality %.4f over 6 h (band 0.50-0.65), bound (rss>=0.9) %.4f, gain %.1f points",
                unbound, bound_min, gain)};
}

// label + train through the same command path as the CLI
json train_on_defaults(std::uint64_t seed, double& train_secs) {
    const auto dir = scratch("s" + std::to_string(seed));
    app::CommandOptions o;
    o.seed = seed;
    o.out = dir.string();
    o.samples = 2000;
    if (run("label", o) != 0) {
        throw std::runtime_error("label failed");
    }
    const auto t0 = std::chrono::steady_clock::now();
    if (run("train", o) != 0) {
        throw std::runtime_error("train failed");
    }
    train_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto eval = read_json(dir / "eval.json");
    fs::remove_all(dir);
    return eval;
}

Outcome model_ordering() {
    double secs = 0.0;
    const auto e = train_on_defaults(1, secs);
    const double g = e["gbt"]["r2"], f = e["forest"]["r2"], l = e["linear"]["r2"];
    const double mae = e["gbt"]["mae"];
    const std::size_t test = e["test_size"];
    return {g > f && f > l && g >= 0.85 && l <= 0.5 && mae <= 0.05 && test == 300 && secs < 120,
            fmt("R2 gbt %.4f > forest %.4f > linear %.4f; gbt MAE %.4f; test n=%zu; train+grid %.1f s",
                g, f, l, mae, test, secs)};
}

Outcome feature_importance() {
    int hits = 0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        double secs = 0.0;
        const auto e = train_on_defaults(seed, secs);
        std::vector<std::pair<double, std::string>> ranks;
        for (const auto& [name, v] : e["importances"]["values"].items()) {
            ranks.emplace_back(v.get<double>(), name);
        }
        std::sort(ranks.rbegin(), ranks.rend());
        const bool hit = (ranks[0].second == "mbw" && ranks[1].second == "rmbr") ||
                         (ranks[0].second == "rmbr" && ranks[1].second == "mbw");
        hits += hit;
        per_seed += fmt(" s%d:%s,%s", static_cast<int>(seed), ranks[0].second.c_str(),
                        ranks[1].second.c_str());
    }
    return {hits >= 4, fmt("mbw+rmbr on top in %d/5 seeds;", hits) + per_seed};
}

Outcome strategy_comparison() {
    const auto spec = app::load_spec(std::string{NUMAOPT_SOURCE_DIR} + "/configs/reference.json");
    const auto a = app::run_experiment(spec, {true, policy::Strategy::A, {}}).summary;
    const auto b = app::run_experiment(spec, {true, policy::Strategy::B, {}}).summary;
    const double ratio = b.unbind_ratio / a.unbind_ratio;
    const double lat = b.mean_cpi / a.mean_cpi;
    return {a.unbind_ratio > 0.0 && b.unbind_ratio <= 0.7 * a.unbind_ratio && std::abs(lat - 1.0) <= 0.02,
            fmt("unbind ratio A %.4f, B %.4f (B/A %.3f, limit 0.7); latency B/A %.4f (limit +-2%%)",
                a.unbind_ratio, b.unbind_ratio, ratio, lat)};
}

Outcome policy_properties() {
    using cluster::BindState;
    using policy::OptimizerAction;
    const auto server = cluster::Server("s0", cluster::build_topology(2, 16, 65536, 60, 80, 138));
    cluster::ServiceCatalog catalog;
    for (double q : {1.0, 2.0, 3.0, 5.0}) {
        cluster::ServiceProfile p;
        p.service_id = "q" + std::to_string(static_cast<int>(q));
        p.cpu_quota = q;
        catalog.emplace(p.service_id, p);
    }
    Rng rng(2024);
    int strict_fail = 0, exclusive_fail = 0, rollback_fail = 0, victim_fail = 0, victims = 0;
    const int trials = 3000;
    for (int t = 0; t < trials; ++t) {
        policy::PolicyConfig cfg;
        cfg.node_util_hot = rng.uniform(0.5, 0.9);
        cfg.quota_over = rng.uniform(0.8, 1.2);
        // dyadic so that (0.5 + band) - 0.5 == band exactly
        cfg.imbalance_band = static_cast<double>(rng.below(20)) / 64.0;
        cfg.strategy = rng.bernoulli(0.5) ? policy::Strategy::A : policy::Strategy::B;

        // strict thresholds: exactly at either edge never fires, just above does
        policy::UtilizationHistory low(3600, 2);
        low.append(0, std::vector<double>{0.0, 0.0});
        auto c = cluster::make_instance("c", "q1", "s0", server.topology(), BindState::bound(0), 0);
        const double hot = cfg.node_util_hot;
        c.current_util = cfg.quota_over;
        const std::vector<double> above{hot + 1e-9, 0.0};
        const std::vector<double> at{hot, 0.0};
        strict_fail += policy::should_unbind_A(c, above, cfg).value;
        c.current_util = std::nextafter(cfg.quota_over, 2.0);
        strict_fail += policy::should_unbind_A(c, at, cfg).value;
        strict_fail += !policy::should_unbind_A(c, above, cfg).value;
        const std::vector<double> band{0.5 + cfg.imbalance_band, 0.5};
        strict_fail += policy::should_unbind_B(c, band, low, cfg).value;

        // random server state
        std::vector<cluster::ContainerInstance> cs;
        std::map<std::string, metrics::FeatureVector> feats;
        const int n = 2 + static_cast<int>(rng.below(8));
        for (int i = 0; i < n; ++i) {
            const auto state = rng.bernoulli(0.6) ? BindState::bound(static_cast<int>(rng.below(2)))
                                                  : BindState::unbound();
            const std::string id = "c" + std::to_string(i);
            const std::string svc = "q" + std::to_string(std::array{1, 2, 3, 5}[rng.below(4)]);
            auto ci = cluster::make_instance(id, svc, "s0", server.topology(), state,
                                             state.is_bound() ? state.node() : 0);
            ci.current_util = rng.uniform(0.2, 1.6);
            cs.push_back(ci);
            feats[id] = {rng.uniform(0, 20), rng.uniform(), rng.uniform(), rng.uniform()};
        }
        policy::UtilizationHistory hist(3600, 2);
        for (int i = 0; i < 5; ++i) {
            hist.append(i, std::vector<double>{rng.uniform(0, 1), rng.uniform(0, 1)});
        }
        const auto actions = policy::optimizer_tick(
            server, cs, catalog, hist, cfg,
            [](const metrics::FeatureVector& f) { return 0.1 * f.rmbr; }, feats);
        bool binds = false, unbinds = false;
        for (const auto& a : actions) {
            binds |= a.kind == OptimizerAction::Kind::Bind;
            unbinds |= a.kind == OptimizerAction::Kind::Unbind;
        }
        exclusive_fail += binds && unbinds;

        // first victim: least cores in use among bound over-quota containers on the hottest hot node
        if (cfg.strategy == policy::Strategy::A) {
            std::vector<double> cores(2, 0.0);
            for (const auto& ci : cs) {
                const double used = ci.current_util * catalog.at(ci.service_id).cpu_quota;
                if (ci.bind_state.is_bound()) {
                    cores[static_cast<std::size_t>(ci.bind_state.node())] += used;
                } else {
                    cores[0] += used / 2;
                    cores[1] += used / 2;
                }
            }
            int hottest = -1;
            const cluster::ContainerInstance* expect = nullptr;
            for (int node = 0; node < 2; ++node) {
                const double u = cores[static_cast<std::size_t>(node)] / 16.0;
                if (!(u > cfg.node_util_hot)) {
                    continue;
                }
                const cluster::ContainerInstance* best = nullptr;
                for (const auto& ci : cs) {
                    if (ci.bind_state == BindState::bound(node) && ci.current_util > cfg.quota_over) {
                        const double used = ci.current_util * catalog.at(ci.service_id).cpu_quota;
                        const double best_used =
                            best ? best->current_util * catalog.at(best->service_id).cpu_quota : 0.0;
                        if (!best || used < best_used ||
                            (used == best_used && ci.container_id < best->container_id)) {
                            best = &ci;
                        }
                    }
                }
                if (best && (hottest < 0 || u > cores[static_cast<std::size_t>(hottest)] / 16.0)) {
                    hottest = node;
                    expect = best;
                }
            }
            if (expect) {
                ++victims;
                victim_fail += !(actions[0].kind == OptimizerAction::Kind::Unbind &&
                                 actions[0].container_id == expect->container_id);
            } else {
                victim_fail += unbinds;
            }
        }

        // rollback round trip
        auto before = cs;
        std::map<std::string, double> preds;
        for (const auto& ci : cs) {
            preds[ci.service_id] = rng.uniform(0, 0.2);
        }
        auto plan = policy::select_top_services(preds, 2, cfg);
        policy::apply_plan(plan, cs, [&](const auto&, auto) {
            return std::optional<cluster::NodeId>(static_cast<int>(rng.below(2)));
        });
        policy::rollback(plan, cs);
        policy::rollback(plan, cs);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            rollback_fail += !(cs[i].bind_state == before[i].bind_state);
        }
    }
    return {strict_fail == 0 && exclusive_fail == 0 && rollback_fail == 0 && victim_fail == 0 &&
                victims > 100,
            fmt("%d random states: strict-threshold violations %d, bind+unbind ticks %d, rollback "
                "mismatches %d, wrong victims %d of %d",
                trials, strict_fail, exclusive_fail, rollback_fail, victim_fail, victims)};
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            std::ifstream in(e.path(), std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            out[fs::relative(e.path(), dir).string()] = ss.str();
        }
    }
    return out;
}

Outcome determinism() {
    const auto root = scratch("det");
    auto spec = read_json(std::string{NUMAOPT_SOURCE_DIR} + "/configs/reference.json");
    spec["sim"]["duration_s"] = 4 * 3600;
    spec["labels"] = {{"duration_s", 1800}};
    spec["train"] = {{"folds", 3},
                     {"grid", {{"n_trees", {10, 20}}, {"max_depth", {2, 3}}, {"learning_rate", {0.3}},
                               {"min_samples_leaf", {5}}}},
                     {"forest", {{"n_trees", 20}}}};
    const auto cfg = root / "cfg.json";
    std::ofstream(cfg) << spec.dump(2);

    int failed_runs = 0;
    for (const char* rep : {"r1", "r2"}) {
        app::CommandOptions o;
        o.config = cfg.string();
        o.out = (root / rep).string();
        o.samples = 60;
        failed_runs += run("simulate", o) != 0;
        failed_runs += run("label", o) != 0;
        failed_runs += run("train", o) != 0;
        o.model = (root / rep / "model_gbt.json").string();
        failed_runs += run("evaluate", o) != 0;
        failed_runs += run("compare-strategies", o) != 0;
        failed_runs += run("report", o) != 0;
    }
    const auto a = dir_contents(root / "r1");
    const auto b = dir_contents(root / "r2");
    int differing = 0;
    std::string names;
    for (const auto& [name, text] : a) {
        const auto it = b.find(name);
        if (it == b.end() || it->second != text) {
            ++differing;
            names += " " + name;
        }
    }
    differing += static_cast<int>(b.size() > a.size());
    fs::remove_all(root);
    return {failed_runs == 0 && differing == 0 && a.size() >= 20,
            fmt("6 commands x 2 runs, %zu files compared, %d differ, %d commands failed", a.size(),
                differing, failed_runs) + names};
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;  // 0: none
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numaopt acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "migration cost fidelity", 1, migration_cost_fidelity},
        {2, "latency constants", 1, latency_constants},
        {3, "baseline locality regime", 60, baseline_locality},
        {4, "model ordering", 0, model_ordering},
        {5, "feature importance", 0, feature_importance},
        {6, "strategy comparison", 120, strategy_comparison},
        {7, "policy properties", 10, policy_properties},
        {8, "determinism", 0, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string{"exception: "} + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
            o.pass = false;
            o.detail += fmt(" (over the %.0f s limit)", c.time_limit_s);
        }
        failures += !o.pass;
        std::cout << 'C' << c.id << (o.pass ? " PASS " : " FAIL ") << c.name << ": " << o.detail
                  << fmt(" [%.2f s]", secs) << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
