#include <doctest.h>

#include <numaopt/common/rng.hpp>
#include <numaopt/sim/allocation.hpp>
#include <numaopt/sim/improvement.hpp>
#include <numaopt/sim/load_curve.hpp>
#include <numaopt/sim/migration_cost.hpp>
#include <numaopt/sim/performance.hpp>
#include <numaopt/sim/simulator.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace numaopt;
using namespace numaopt::sim;
using cluster::BindState;

namespace {

cluster::NumaTopology small_topology(int nodes = 2, double mem_mib = 4.0) {
    return cluster::build_topology(nodes, 8, mem_mib, 100, 80, 138);
}

// Page-by-page first touch: mapped pages go to the running node until it is
// full, then to the node with the most free pages; cache pages walk the nodes
// round-robin from the cursor, skipping full nodes.
PagePlacement first_touch_oracle(std::vector<std::int64_t> free, std::int64_t pages,
                                 double rss_ratio, std::size_t running, std::size_t cursor) {
    const std::size_t n = free.size();
    PagePlacement out{std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0)};
    const auto rss = static_cast<std::int64_t>(std::llround(static_cast<double>(pages) * rss_ratio));
    std::size_t spill = n;
    for (std::int64_t p = 0; p < rss; ++p) {
        std::size_t target = running;
        if (free[running] == 0) {
            if (spill == n || free[spill] == 0) {
                spill = static_cast<std::size_t>(
                    std::max_element(free.begin(), free.end()) - free.begin());
            }
            target = spill;
        }
        --free[target];
        ++out.rss[target];
    }
    for (std::int64_t p = rss; p < pages; ++p) {
        while (free[cursor % n] == 0) {
            ++cursor;
        }
        --free[cursor % n];
        ++out.cache[cursor % n];
        ++cursor;
    }
    return out;
}

cluster::ServiceProfile profile(const std::string& id) {
    cluster::ServiceProfile p;
    p.service_id = id;
    p.cpu_quota = 4;
    p.mem_demand_mib = 512;
    p.rss_ratio = 1.0;
    p.bw_demand_peak_gbs = 5;
    p.compute_cpi = 1.0;
    p.mem_access_intensity = 0.01;
    p.peak_util = 0.7;
    return p;
}

Simulator one_container_sim(const SimConfig& config, const cluster::ServiceProfile& p,
                            BindState state) {
    const auto topo = cluster::build_topology(2, 24, 98304, 100, 80, 138);
    cluster::ServiceCatalog catalog{{p.service_id, p}};
    std::vector<cluster::Server> servers{cluster::Server("s0", topo)};
    std::vector<cluster::ContainerInstance> cs{
        cluster::make_instance("c0", p.service_id, "s0", topo, state, 0)};
    return Simulator(config, catalog, builtin_load_curves(), servers, cs);
}

double mean_locality(const MetricsLog& log, double from = 0.0) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : log) {
        if (s.window_start >= from) {
            sum += s.locality;
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

// Event-level hop chain: after each burst the thread either returns to the
// preferred node or, with probability p, moves to a uniformly chosen other node.
double hop_chain_preferred_share(double p, std::size_t nodes, std::size_t bursts,
                                 std::uint64_t seed) {
    Rng rng(seed);
    std::size_t at = 0;
    double on_pref = 0.0;
    double total = 0.0;
    for (std::size_t b = 0; b < bursts; ++b) {
        const double len = rng.uniform(0.4, 10.0);
        total += len;
        if (at == 0) {
            on_pref += len;
        }
        if (rng.uniform() < p) {
            std::size_t next = at;
            while (next == at) {
                next = static_cast<std::size_t>(rng.below(nodes));
            }
            at = next;
        } else {
            at = 0;
        }
    }
    return on_pref / total;
}

} // namespace

TEST_SUITE("simulation") {

TEST_CASE("first touch: everything local when there is room") {
    const auto topo = small_topology();
    NodeMemoryLedger ledger(topo);
    auto c = cluster::make_instance("c", "s", "s0", topo, BindState::unbound(), 0);
    const auto placed = first_touch_allocate(c, 1000, 1.0, 0, topo, ledger);
    CHECK(placed.rss == std::vector<std::int64_t>{1000, 0});
    CHECK(placed.cache == std::vector<std::int64_t>{0, 0});
    CHECK(c.rss_pages == std::vector<std::int64_t>{1000, 0});
    CHECK(ledger.used(0) == 1000);
}

TEST_CASE("first touch: page cache is spread round-robin") {
    const auto topo = small_topology();
    NodeMemoryLedger ledger(topo);
    auto c = cluster::make_instance("c", "s", "s0", topo, BindState::unbound(), 0);
    const auto want = first_touch_oracle({1024, 1024}, 1000, 0.5, 0, 0);
    const auto placed = first_touch_allocate(c, 1000, 0.5, 0, topo, ledger);
    CHECK(placed.rss == want.rss);
    CHECK(placed.cache == want.cache);
    CHECK(placed.rss == std::vector<std::int64_t>{500, 0});
    CHECK(placed.cache == std::vector<std::int64_t>{250, 250});
}

TEST_CASE("first touch: mapped pages spill when the running node is full") {
    const auto topo = small_topology(); // 1024 pages per node
    NodeMemoryLedger ledger(topo);
    ledger.take(0, 1024 - 400);
    auto c = cluster::make_instance("c", "s", "s0", topo, BindState::unbound(), 0);
    const auto want = first_touch_oracle({400, 1024}, 500, 1.0, 0, 0);
    const auto placed = first_touch_allocate(c, 500, 1.0, 0, topo, ledger);
    CHECK(placed.rss == want.rss);
    CHECK(placed.rss == std::vector<std::int64_t>{400, 100});
}

TEST_CASE("first touch matches the page-by-page oracle on random requests") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const int nodes = 2 + static_cast<int>(rng.below(3));
        const auto topo = small_topology(nodes);
        NodeMemoryLedger ledger(topo);
        std::vector<std::int64_t> free;
        for (int n = 0; n < nodes; ++n) {
            const auto pre = static_cast<std::int64_t>(rng.below(1025));
            ledger.take(n, pre);
            free.push_back(1024 - pre);
        }
        auto c = cluster::make_instance("c", "s", "s0", topo, BindState::unbound(), 0);
        c.cache_cursor = rng.below(static_cast<std::uint64_t>(nodes));
        const auto cursor = c.cache_cursor;
        const std::int64_t total_free = std::accumulate(free.begin(), free.end(), std::int64_t{0});
        const auto pages = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total_free) + 1));
        // one spill target is enough for two nodes; cache placement is checked on any count
        const double rss = nodes == 2 ? rng.uniform() : 0.0;
        const auto running = static_cast<int>(rng.below(static_cast<std::uint64_t>(nodes)));
        CAPTURE(trial);
        const auto want = first_touch_oracle(free, pages, rss, static_cast<std::size_t>(running), cursor);
        const auto placed = first_touch_allocate(c, pages, rss, running, topo, ledger);
        CHECK(placed.rss == want.rss);
        CHECK(placed.cache == want.cache);
        CHECK(c.total_pages() == pages);
    }
}

TEST_CASE("first touch failure leaves state untouched") {
    const auto topo = small_topology();
    NodeMemoryLedger ledger(topo);
    auto c = cluster::make_instance("c", "s", "s0", topo, BindState::unbound(), 0);
    first_touch_allocate(c, 100, 1.0, 0, topo, ledger);
    const auto before = c.pages_per_node();
    CHECK_THROWS_AS(first_touch_allocate(c, 2048, 1.0, 0, topo, ledger), AllocationError);
    CHECK(c.pages_per_node() == before);
    CHECK(ledger.used(0) == 100);
    CHECK(ledger.used(1) == 0);
    CHECK_THROWS_AS(first_touch_allocate(c, -1, 1.0, 0, topo, ledger), std::invalid_argument);
}

TEST_CASE("release and apportion") {
    CHECK(apportion(10, std::vector<double>{1, 1, 1}) == std::vector<std::int64_t>{4, 3, 3});
    CHECK(apportion(7, std::vector<double>{0, 1}) == std::vector<std::int64_t>{0, 7});
    CHECK_THROWS_AS(apportion(3, std::vector<double>{0, 0}), std::invalid_argument);

    const auto topo = small_topology();
    NodeMemoryLedger ledger(topo);
    auto c = cluster::make_instance("c", "s", "s0", topo, BindState::unbound(), 0);
    c.rss_pages = {300, 100};
    ledger.take(0, 300);
    ledger.take(1, 100);
    const auto freed = release_pages(c, 40, ledger);
    CHECK(freed.rss == std::vector<std::int64_t>{30, 10});
    CHECK(c.rss_pages == std::vector<std::int64_t>{270, 90});
    CHECK(ledger.used(0) == 270);
}

TEST_CASE("effective latency") {
    const auto topo = cluster::build_topology(2, 24, 98304, 100, 80, 138);
    CHECK(effective_latency(1.0, topo, 0.5) == 80.0);
    CHECK(effective_latency(0.0, topo, 1.0) == 138.0);
    CHECK(effective_latency(0.5, topo, 0.0) == doctest::Approx(109.0));
    CHECK(effective_latency(0.0, topo, 0.0) / effective_latency(1.0, topo, 0.0) ==
          doctest::Approx(1.725).epsilon(1e-9));
    // saturation scales the base latency
    CHECK(effective_latency(1.0, topo, 2.0, 1.0) == doctest::Approx(160.0));
    CHECK(effective_latency(1.0, topo, 4.0, 0.5) == doctest::Approx(160.0));
    CHECK_THROWS_AS(effective_latency(1.5, topo, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(effective_latency(0.5, topo, -1.0), std::invalid_argument);

    for (double pressure : {0.0, 1.0, 1.7, 3.0}) {
        double prev = effective_latency(0.0, topo, pressure);
        for (int i = 1; i <= 100; ++i) {
            const double cur = effective_latency(i / 100.0, topo, pressure);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("container cpi") {
    auto p = profile("svc");
    p.compute_cpi = 0.9;
    p.mem_access_intensity = 0.004;
    CHECK(stall_cpi(p, 100.0, 2.5) == doctest::Approx(1.0));
    CHECK(container_cpi(p, 100.0, 2.5) == doctest::Approx(1.9));
    p.mem_access_intensity = 0.0;
    CHECK(container_cpi(p, 138.0, 2.7) == doctest::Approx(0.9));
    CHECK_THROWS_AS(container_cpi(p, 0.0, 2.7), std::invalid_argument);
}

TEST_CASE("migration cost") {
    CHECK(migration_cost(0.0) == 0.0);
    CHECK(migration_cost(2048.0) == 1.272319);
    CHECK(migration_cost(64.0) == 0.041946);
    for (const auto& [mib, s] : kMigrationCostTable) {
        CHECK(migration_cost(mib) == s);
    }
    CHECK(migration_cost(8.0) == doctest::Approx(0.007919 / 2));
    CHECK(migration_cost(3072.0) ==
          doctest::Approx(1.583247 + (1.583247 - 1.272319) / 512.0 * 512.0));
    CHECK_THROWS_AS(migration_cost(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(migration_cost(std::nan("")), std::invalid_argument);
    double prev = 0.0;
    for (double mib = 0.0; mib <= 4000.0; mib += 0.5) {
        const double cur = migration_cost(mib);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("load curves") {
    const auto curves = builtin_load_curves();
    for (const auto& [id, c] : curves) {
        CHECK_NOTHROW(c.validate());
    }
    const auto& d = curves.at("diurnal");
    CHECK(d.at(20 * 3600.0) == 1.0);
    CHECK(d.at(0.0) == d.hourly[0]);
    CHECK(d.at(0.5 * 3600.0) == doctest::Approx(0.5 * (d.hourly[0] + d.hourly[1])));
    CHECK(d.at(23.5 * 3600.0) == doctest::Approx(0.5 * (d.hourly[23] + d.hourly[0])));
    CHECK(d.at(25 * 3600.0) == doctest::Approx(d.hourly[1]));

    LoadCurve bad{"bad", {}};
    bad.hourly.fill(0.5);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.hourly[3] = 1.0;
    CHECK_NOTHROW(bad.validate());
    bad.hourly[4] = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sim config validation") {
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    c.tick_s = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.duration_s = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.migration_prob_per_burst = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("empty system advances the clock with an empty log") {
    SimConfig config;
    config.duration_s = 120;
    const auto topo = cluster::build_topology(2, 24, 98304, 100, 80, 138);
    Simulator sim(config, {}, builtin_load_curves(), {cluster::Server("s0", topo)}, {});
    sim.run_until(120);
    CHECK(sim.clock() == doctest::Approx(120));
    CHECK(sim.metrics_log().empty());
    CHECK(sim.finished());
    CHECK_THROWS_AS(sim.step(), std::logic_error);
}

TEST_CASE("bound fully mapped container is always local") {
    SimConfig config;
    config.duration_s = 1800;
    auto sim = one_container_sim(config, profile("svc"), BindState::bound(1));
    sim.run_until(config.duration_s);
    REQUIRE(sim.metrics_log().size() == 30);
    for (const auto& s : sim.metrics_log()) {
        CHECK(s.locality == 1.0);
        CHECK(s.bound_node == 1);
        CHECK(s.remote_bw_gbs == 0.0);
        CHECK_NOTHROW(s.validate());
    }
    const auto& c = sim.containers()[0];
    CHECK(c.rss_pages[0] == 0);
}

TEST_CASE("hop chain stationary share") {
    for (double p : {0.1, 0.5, 0.9}) {
        for (std::size_t nodes : {2u, 4u}) {
            const double mc = hop_chain_preferred_share(p, nodes, 200000, 99);
            CHECK(stationary_preferred_share(p, nodes) == doctest::Approx(mc).epsilon(0.01));
        }
    }
    CHECK(stationary_preferred_share(0.5, 2) == doctest::Approx(2.0 / 3.0));
    CHECK(stationary_preferred_share(0.0, 2) == 1.0);
}

TEST_CASE("unbound container locality settles in the mid band") {
    SimConfig config;
    config.duration_s = 3600;
    config.migration_prob_per_burst = 0.5;
    auto sim = one_container_sim(config, profile("svc"), BindState::unbound());
    sim.run_until(config.duration_s);
    // ~190 bursts per 1 s tick, so this is several hundred thousand bursts
    const double loc = mean_locality(sim.metrics_log(), 600);
    const double s = hop_chain_preferred_share(0.5, 2, 200000, 3);
    const double predicted = s * s + (1 - s) * (1 - s);
    CHECK(loc >= 0.50);
    CHECK(loc <= 0.65);
    CHECK(loc == doctest::Approx(predicted).epsilon(0.03));
}

TEST_CASE("analytic thread weights match event-level simulation at the mean") {
    for (double p : {0.2, 0.5, 0.8}) {
        SimConfig config;
        config.duration_s = 1800;
        config.migration_prob_per_burst = p;
        auto event = one_container_sim(config, profile("svc"), BindState::unbound());
        config.analytic_burst_threshold = 1.0;
        auto analytic = one_container_sim(config, profile("svc"), BindState::unbound());
        event.run_until(config.duration_s);
        analytic.run_until(config.duration_s);
        CAPTURE(p);
        CHECK(mean_locality(analytic.metrics_log(), 300) ==
              doctest::Approx(mean_locality(event.metrics_log(), 300)).epsilon(0.02));
    }
}

TEST_CASE("binding converges as pages turn over and never moves existing pages") {
    SimConfig config;
    config.duration_s = 3600;
    config.page_turnover_per_hour = 60.0;
    config.migration_prob_per_burst = 0.5;
    auto sim = one_container_sim(config, profile("svc"), BindState::unbound());
    sim.run_until(1200);
    const auto before = sim.containers()[0].pages_per_node();
    CHECK(before[1] > 0);
    sim.set_bind_state("c0", BindState::bound(0));
    CHECK(sim.containers()[0].pages_per_node() == before);
    sim.run_until(1800);
    const auto& log = sim.metrics_log();
    CHECK(log.back().locality >= 0.99);
    CHECK(log.back().bound_node == 0);
    CHECK_THROWS_AS(sim.set_bind_state("c0", BindState::bound(5)), std::invalid_argument);
    CHECK_THROWS_AS(sim.set_bind_state("nope", BindState::unbound()), std::invalid_argument);
}

TEST_CASE("pages are conserved every step") {
    SimConfig config;
    config.duration_s = 900;
    config.page_turnover_per_hour = 5.0;
    auto p = profile("svc");
    p.rss_ratio = 0.6;
    p.load_curve_id = "diurnal";
    const auto topo = cluster::build_topology(2, 24, 98304, 100, 80, 138);
    std::vector<cluster::ContainerInstance> cs{
        cluster::make_instance("a", "svc", "s0", topo, BindState::unbound(), 0),
        cluster::make_instance("b", "svc", "s0", topo, BindState::bound(1), 1)};
    Simulator sim(config, {{"svc", p}}, builtin_load_curves(), {cluster::Server("s0", topo)}, cs);
    const std::int64_t full = cluster::pages_for_mib(p.mem_demand_mib);
    while (!sim.finished()) {
        const double load = builtin_load_curves().at("diurnal").at(sim.clock());
        sim.step();
        const auto target = static_cast<std::int64_t>(
            std::floor(static_cast<double>(full) * (0.5 + 0.5 * load)));
        std::vector<std::int64_t> per_node(2, 0);
        for (const auto& c : sim.containers()) {
            CHECK(c.total_pages() >= target);
            CHECK(c.total_pages() <= full);
            for (std::size_t n = 0; n < 2; ++n) {
                per_node[n] += c.pages_per_node()[n];
            }
        }
        for (std::size_t n = 0; n < 2; ++n) {
            CHECK(sim.state().ledgers[0].used(static_cast<int>(n)) == per_node[n]);
        }
    }
}

TEST_CASE("identical config gives identical logs") {
    SimConfig config;
    config.duration_s = 600;
    config.seed = 77;
    auto a = one_container_sim(config, profile("svc"), BindState::unbound());
    auto b = one_container_sim(config, profile("svc"), BindState::unbound());
    a.run_until(300);
    b.run_until(300);
    a.set_bind_state("c0", BindState::bound(1));
    b.set_bind_state("c0", BindState::bound(1));
    a.run_until(600);
    b.run_until(600);
    REQUIRE(a.metrics_log().size() == b.metrics_log().size());
    for (std::size_t i = 0; i < a.metrics_log().size(); ++i) {
        const auto& x = a.metrics_log()[i];
        const auto& y = b.metrics_log()[i];
        CHECK(x.locality == y.locality);
        CHECK(x.stall_cycles == y.stall_cycles);
        CHECK(x.cpu_util == y.cpu_util);
        CHECK(x.total_pages == y.total_pages);
    }
}

TEST_CASE("simulator rejects inconsistent inputs") {
    SimConfig config;
    const auto topo = cluster::build_topology(2, 24, 98304, 100, 80, 138);
    auto p = profile("svc");
    p.load_curve_id = "missing";
    CHECK_THROWS_AS(Simulator(config, {{"svc", p}}, builtin_load_curves(),
                              {cluster::Server("s0", topo)}, {}),
                    std::invalid_argument);
    std::vector<cluster::ContainerInstance> cs{
        cluster::make_instance("a", "svc", "s9", topo, BindState::unbound(), 0)};
    CHECK_THROWS_AS(Simulator(config, {{"svc", profile("svc")}}, builtin_load_curves(),
                              {cluster::Server("s0", topo)}, cs),
                    std::invalid_argument);
}

TEST_CASE("measure_improvement") {
    SimConfig config;
    config.tick_s = 10;
    config.duration_s = 3600;
    config.migration_prob_per_burst = 0.5;
    PlacementContext ctx{cluster::build_topology(2, 24, 98304, 100, 80, 138), {}, 0};

    auto p = profile("svc");
    p.mem_access_intensity = 0.0;
    CHECK(measure_improvement(p, ctx, config).improvement == doctest::Approx(0.0).epsilon(1e-9));

    p = profile("svc");
    p.rss_ratio = 0.0;
    // residual from odd page-cache counts only
    CHECK(std::fabs(measure_improvement(p, ctx, config).improvement) < 1e-4);

    p = profile("svc");
    p.mem_access_intensity = 0.02;
    const auto r = measure_improvement(p, ctx, config);
    CHECK(r.locality_unbound == doctest::Approx(0.55).epsilon(0.1));
    CHECK(r.locality_bound > 0.99);
    CHECK(r.improvement > 0.0);
    CHECK(r.improvement == doctest::Approx((r.cpi_unbound - r.cpi_bound) / r.cpi_unbound));
    CHECK(r.unbound_features.rmbr > 0.3);

    ctx.target_node = 7;
    CHECK_THROWS_AS(measure_improvement(p, ctx, config), std::invalid_argument);
}

TEST_CASE("binding onto a saturated node can hurt") {
    SimConfig config;
    config.tick_s = 10;
    config.duration_s = 3600;
    config.migration_prob_per_burst = 0.5;
    cluster::ServiceProfile heavy = profile("neighbour");
    heavy.bw_demand_peak_gbs = 60;
    heavy.peak_util = 0.8;
    PlacementContext ctx{cluster::build_topology(2, 24, 98304, 100, 80, 138),
                         {{heavy, BindState::bound(0), 0}, {heavy, BindState::bound(1), 1}},
                         0};
    auto p = profile("svc");
    p.bw_demand_peak_gbs = 150;
    const auto r = measure_improvement(p, ctx, config);
    CHECK(r.improvement < 0.0);
}

}
