#include <doctest.h>

#include <numaopt/cluster/cluster.hpp>
#include <numaopt/common/rng.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace numaopt;
using namespace numaopt::cluster;

namespace {

ServiceCatalog catalog_with(std::initializer_list<std::pair<const char*, double>> quotas) {
    ServiceCatalog catalog;
    for (auto [id, quota] : quotas) {
        ServiceProfile p;
        p.service_id = id;
        p.cpu_quota = quota;
        catalog.emplace(id, p);
    }
    return catalog;
}

ContainerInstance container(const std::string& id, const std::string& svc, const Server& s,
                            BindState state, double util) {
    auto c = make_instance(id, svc, s.server_id(), s.topology(), state,
                           state.is_bound() ? state.node() : 0);
    c.current_util = util;
    return c;
}

// Sum over every (page node, thread node) pair, counting the pair local when equal.
double locality_oracle(const std::vector<std::int64_t>& pages, const std::vector<double>& time) {
    const double total = std::accumulate(pages.begin(), pages.end(), 0.0);
    double local = 0.0;
    for (std::size_t p = 0; p < pages.size(); ++p) {
        for (std::size_t t = 0; t < time.size(); ++t) {
            if (p == t) {
                local += static_cast<double>(pages[p]) / total * time[t];
            }
        }
    }
    return local;
}

} // namespace

TEST_SUITE("cluster") {

TEST_CASE("build_topology") {
    const auto topo = build_topology(2, 24, 98304, 100, 80, 138);
    REQUIRE(topo.node_count() == 2);
    CHECK(topo.node(0).local_latency_ns == 80.0);
    CHECK(topo.node(1).cores == 24);
    CHECK(topo.remote_latency_ns() == 138.0);
    CHECK(topo.total_cores() == 48);

    CHECK_THROWS_AS(build_topology(2, 1, 1, 1, 10, 10), std::invalid_argument);
    CHECK_THROWS_AS(build_topology(1, 24, 98304, 100, 80, 138), std::invalid_argument);

    const auto four = build_topology(4, 24, 98304, 100, 80, 138);
    CHECK(four.node_count() == 4);
    for (const auto& n : four.nodes()) {
        CHECK(n.cores == 24);
        CHECK(n.local_latency_ns == 80.0);
    }
    CHECK(four.remote_latency_ns() == 138.0);
    CHECK_THROWS_AS(four.node(4), std::out_of_range);
}

TEST_CASE("topology validation") {
    CHECK_THROWS_AS(NumaTopology({{0, 0, 1, 1, 10}, {1, 1, 1, 1, 10}}, 20), std::invalid_argument);
    CHECK_THROWS_AS(NumaTopology({{0, 1, 1, 1, 10}, {2, 1, 1, 1, 10}}, 20), std::invalid_argument);
    CHECK_THROWS_AS(NumaTopology({{0, 1, 1, 1, 10}, {1, 1, 1, 1, 30}}, 20), std::invalid_argument);
}

TEST_CASE("bind state text round trip") {
    CHECK(BindState::unbound().to_string() == "unbound");
    CHECK(BindState::bound(1).to_string() == "bound:1");
    CHECK(BindState::parse("bound:3") == BindState::bound(3));
    CHECK(BindState::parse("unbound") == BindState::unbound());
    CHECK_THROWS_AS(BindState::parse("bound:"), std::invalid_argument);
    CHECK_THROWS_AS(BindState::parse("pinned"), std::invalid_argument);
}

TEST_CASE("service profile validation") {
    ServiceProfile p;
    p.service_id = "svc";
    CHECK_NOTHROW(p.validate());
    p.rss_ratio = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.rss_ratio = 0.5;
    p.cpu_quota = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("server hosts unique ids") {
    Server s("s0", build_topology(2, 24, 98304, 100, 80, 138));
    s.host("a");
    CHECK(s.hosts("a"));
    CHECK_THROWS_AS(s.host("a"), std::invalid_argument);
    s.evict("a");
    CHECK_FALSE(s.hosts("a"));
}

TEST_CASE("node_utilization examples") {
    Server s("s0", build_topology(2, 24, 98304, 100, 80, 138));
    const auto catalog = catalog_with({{"big", 12.0}, {"six", 6.0}});
    std::vector<ContainerInstance> none;
    CHECK(node_utilization(s, 0, none, catalog) == 0.0);

    std::vector<ContainerInstance> one{container("c0", "big", s, BindState::bound(0), 1.0)};
    CHECK(node_utilization(s, 0, one, catalog) == doctest::Approx(0.5));
    CHECK(node_utilization(s, 1, one, catalog) == 0.0);

    std::vector<ContainerInstance> two{container("u0", "six", s, BindState::unbound(), 1.0),
                                       container("u1", "six", s, BindState::unbound(), 1.0)};
    const auto utils = node_utilizations(s, two, catalog);
    CHECK(utils[0] == doctest::Approx(0.25));
    CHECK(utils[1] == doctest::Approx(0.25));
    // per-node shares add back up to the total usage
    CHECK((utils[0] + utils[1]) * 24 == doctest::Approx(12.0));

    CHECK_THROWS_AS(node_utilization(s, 2, two, catalog), std::out_of_range);
}

TEST_CASE("node utilization ignores other servers") {
    Server s0("s0", build_topology(2, 24, 98304, 100, 80, 138));
    Server s1("s1", build_topology(2, 24, 98304, 100, 80, 138));
    const auto catalog = catalog_with({{"big", 12.0}});
    std::vector<ContainerInstance> v{container("c0", "big", s1, BindState::bound(0), 1.0)};
    CHECK(node_utilization(s0, 0, v, catalog) == 0.0);
}

TEST_CASE("node utilization sums to server usage over random states") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int nodes = 2 + static_cast<int>(rng.below(3));
        Server s("s", build_topology(nodes, 16, 65536, 50, 80, 138));
        const auto catalog = catalog_with({{"a", 2.0}, {"b", 5.0}});
        std::vector<ContainerInstance> v;
        double total = 0.0;
        for (int i = 0; i < 8; ++i) {
            const bool bound = rng.bernoulli(0.5);
            const auto state = bound ? BindState::bound(static_cast<int>(rng.below(nodes)))
                                     : BindState::unbound();
            const std::string svc = rng.bernoulli(0.5) ? "a" : "b";
            v.push_back(container("c" + std::to_string(i), svc, s, state, rng.uniform(0, 1.5)));
            total += v.back().current_util * catalog.at(svc).cpu_quota;
        }
        const auto utils = node_utilizations(s, v, catalog);
        double sum = 0.0;
        for (double u : utils) {
            CHECK(u >= 0.0);
            sum += u;
        }
        CHECK(sum / nodes == doctest::Approx(total / s.topology().total_cores()).epsilon(1e-9));
    }
}

TEST_CASE("locality_ratio examples") {
    CHECK(locality_ratio(std::vector<std::int64_t>{100, 0}, std::vector<double>{1.0, 0.0}) ==
          1.0);
    CHECK(locality_ratio(std::vector<std::int64_t>{50, 50}, std::vector<double>{1.0, 0.0}) ==
          doctest::Approx(0.5));
    const std::vector<std::int64_t> pages{70, 30};
    const std::vector<double> time{0.6, 0.4};
    CHECK(locality_ratio(pages, time) == doctest::Approx(locality_oracle(pages, time)));
    CHECK(locality_ratio(pages, time) == doctest::Approx(0.54));

    CHECK_THROWS_AS(locality_ratio(pages, std::vector<double>{0.6, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(locality_ratio(pages, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("locality is 1 when pages and threads share one node, any topology size") {
    for (std::size_t nodes = 2; nodes <= 6; ++nodes) {
        for (std::size_t home = 0; home < nodes; ++home) {
            std::vector<std::int64_t> pages(nodes, 0);
            std::vector<double> time(nodes, 0.0);
            pages[home] = 1234;
            time[home] = 1.0;
            CHECK(locality_ratio(pages, time) == 1.0);
        }
    }
}

TEST_CASE("locality matches the pairwise oracle on random inputs") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t nodes = 2 + rng.below(4);
        std::vector<std::int64_t> pages(nodes);
        std::vector<double> time(nodes);
        double tsum = 0.0;
        for (std::size_t n = 0; n < nodes; ++n) {
            pages[n] = static_cast<std::int64_t>(rng.below(10000)) + 1;
            time[n] = rng.uniform();
            tsum += time[n];
        }
        for (auto& t : time) {
            t /= tsum;
        }
        const double got = locality_ratio(pages, time);
        CHECK(got == doctest::Approx(locality_oracle(pages, time)).epsilon(1e-12));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("container page accounting") {
    Server s("s0", build_topology(2, 24, 98304, 100, 80, 138));
    auto c = make_instance("c", "svc", "s0", s.topology(), BindState::unbound(), 1);
    CHECK(c.rss_pages.size() == 2);
    c.rss_pages = {10, 5};
    c.cache_pages = {1, 2};
    CHECK(c.pages_per_node() == std::vector<std::int64_t>{11, 7});
    CHECK(c.total_pages() == 18);
    CHECK(c.total_rss_pages() == 15);
    CHECK(locality_ratio(c, std::vector<double>{1.0, 0.0}) == doctest::Approx(11.0 / 18.0));
    CHECK_THROWS_AS(make_instance("x", "svc", "s0", s.topology(), BindState::bound(5), 0),
                    std::invalid_argument);
}

TEST_CASE("page size accounting") {
    CHECK(kPagesPerMiB == 256);
    CHECK(pages_for_mib(2.0) == 512);
    CHECK(mib_for_pages(1024) == 4.0);
}

}
