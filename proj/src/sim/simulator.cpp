#include <numaopt/sim/simulator.hpp>

#include <numaopt/sim/performance.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace numaopt::sim {

using cluster::BindState;
using cluster::ContainerInstance;
using cluster::NodeId;

namespace {

constexpr double kTimeEps = 1e-9;

void require(bool ok, const char* field, const char* rule) {
    if (!ok) {
        throw std::invalid_argument(std::string{"sim."} + field + " " + rule);
    }
}

} // namespace

void SimConfig::validate() const {
    require(tick_s > 0.0, "tick_s", "must be > 0");
    require(duration_s >= tick_s, "duration_s", "must be >= tick_s");
    require(migration_prob_per_burst >= 0.0 && migration_prob_per_burst <= 1.0,
            "migration_prob_per_burst", "must be in [0,1]");
    require(saturation_exponent >= 0.0, "saturation_exponent", "must be >= 0");
    require(window_s > 0.0, "window_s", "must be > 0");
    require(page_turnover_per_hour >= 0.0, "page_turnover_per_hour", "must be >= 0");
    require(analytic_burst_threshold > 0.0, "analytic_burst_threshold", "must be > 0");
    require(util_jitter >= 0.0 && util_jitter < 1.0, "util_jitter", "must be in [0,1)");
    require(initial_footprint > 0.0 && initial_footprint <= 1.0, "initial_footprint",
            "must be in (0,1]");
    require(cpu_freq_ghz > 0.0, "cpu_freq_ghz", "must be > 0");
}

double stationary_preferred_share(double migration_prob, std::size_t node_count) {
    if (node_count < 2) {
        return 1.0;
    }
    const double p = migration_prob;
    const double back = (1.0 - p) + p / static_cast<double>(node_count - 1);
    if (p + back <= 0.0) {
        return 1.0;
    }
    return back / (p + back);
}

Simulator::Simulator(SimConfig config, cluster::ServiceCatalog catalog, LoadCurveSet curves,
                     std::vector<cluster::Server> servers,
                     std::vector<cluster::ContainerInstance> containers)
    : config_(config)
    , catalog_(std::move(catalog))
    , curves_(std::move(curves)) {
    config_.validate();
    for (const auto& [id, curve] : curves_) {
        curve.validate();
    }
    for (const auto& [id, profile] : catalog_) {
        profile.validate();
        if (!curves_.contains(profile.load_curve_id)) {
            throw std::invalid_argument("service '" + id + "': unknown load curve '" +
                                        profile.load_curve_id + "'");
        }
    }
    std::map<std::string, std::size_t> server_index;
    for (auto& s : servers) {
        if (!server_index.emplace(s.server_id(), state_.servers.size()).second) {
            throw std::invalid_argument("duplicate server id '" + s.server_id() + "'");
        }
        state_.ledgers.emplace_back(s.topology());
        state_.servers.push_back(std::move(s));
    }
    members_.resize(state_.servers.size());

    for (auto& c : containers) {
        auto sit = server_index.find(c.server_id);
        if (sit == server_index.end()) {
            throw std::invalid_argument("container '" + c.container_id + "': unknown server '" +
                                        c.server_id + "'");
        }
        cluster::profile_of(catalog_, c.service_id);
        const std::size_t si = sit->second;
        cluster::Server& server = state_.servers[si];
        const auto& topo = server.topology();
        if (c.rss_pages.size() != topo.node_count() ||
            c.cache_pages.size() != topo.node_count()) {
            throw std::invalid_argument("container '" + c.container_id +
                                        "': page maps do not match topology");
        }
        if (c.bind_state.is_bound() && !topo.contains(c.bind_state.node())) {
            throw std::invalid_argument("container '" + c.container_id +
                                        "': bound to unknown node");
        }
        server.host(c.container_id);
        for (std::size_t n = 0; n < topo.node_count(); ++n) {
            state_.ledgers[si].take(static_cast<NodeId>(n), c.rss_pages[n] + c.cache_pages[n]);
        }
        const std::size_t ci = state_.containers.size();
        if (!container_index_.emplace(c.container_id, ci).second) {
            throw std::invalid_argument("duplicate container id '" + c.container_id + "'");
        }
        ContainerRuntime rt;
        rt.rng = Rng{derive_seed(config_.seed, "bursts:" + c.container_id)};
        rt.util_rng = Rng{derive_seed(config_.seed, "util:" + c.container_id)};
        rt.thread_node = c.bind_state.is_bound() ? c.bind_state.node() : c.home_node;
        rt.thread_time.assign(topo.node_count(), 0.0);
        rt.thread_time[static_cast<std::size_t>(rt.thread_node)] = 1.0;
        members_[si].push_back(ci);
        state_.containers.push_back(std::move(c));
        state_.runtime.push_back(std::move(rt));
    }
}

bool Simulator::finished() const noexcept {
    return state_.clock + config_.tick_s > config_.duration_s + kTimeEps;
}

std::optional<std::size_t> Simulator::index_of(const std::string& container_id) const {
    auto it = container_index_.find(container_id);
    if (it == container_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void Simulator::set_bind_state(const std::string& container_id, BindState state) {
    const auto ci = index_of(container_id);
    if (!ci) {
        throw std::invalid_argument("unknown container '" + container_id + "'");
    }
    ContainerInstance& c = state_.containers[*ci];
    if (state.is_bound()) {
        const auto si = std::find_if(state_.servers.begin(), state_.servers.end(),
                                     [&](const auto& s) { return s.server_id() == c.server_id; });
        if (!si->topology().contains(state.node())) {
            throw std::invalid_argument("container '" + container_id +
                                        "': bind target is not a node of its server");
        }
        state_.runtime[*ci].thread_node = state.node();
    }
    c.bind_state = state;
}

NodeId Simulator::preferred_node(const ContainerInstance& c) const {
    if (c.total_rss_pages() == 0) {
        return c.home_node;
    }
    const auto it = std::max_element(c.rss_pages.begin(), c.rss_pages.end());
    return static_cast<NodeId>(it - c.rss_pages.begin());
}

std::vector<double> Simulator::thread_weights(std::size_t ci,
                                              const cluster::ServiceProfile& profile) {
    ContainerInstance& c = state_.containers[ci];
    ContainerRuntime& rt = state_.runtime[ci];
    const std::size_t n_nodes = c.rss_pages.size();
    std::vector<double> w(n_nodes, 0.0);
    if (c.bind_state.is_bound()) {
        w[static_cast<std::size_t>(c.bind_state.node())] = 1.0;
        rt.thread_node = c.bind_state.node();
        return w;
    }

    const double p = config_.migration_prob_per_burst;
    const NodeId pref = preferred_node(c);
    const double tick_ms = config_.tick_s * 1000.0;
    const double mean_burst = 0.5 * (profile.burst_ms_low + profile.burst_ms_high);

    if (tick_ms / mean_burst > config_.analytic_burst_threshold) {
        const double share = stationary_preferred_share(p, n_nodes);
        const double rest = (1.0 - share) / static_cast<double>(n_nodes - 1);
        for (std::size_t n = 0; n < n_nodes; ++n) {
            w[n] = static_cast<NodeId>(n) == pref ? share : rest;
        }
        rt.thread_node = pref;
        return w;
    }

    double elapsed = 0.0;
    while (elapsed < tick_ms) {
        double burst = rt.rng.uniform(profile.burst_ms_low, profile.burst_ms_high);
        burst = std::min(burst, tick_ms - elapsed);
        w[static_cast<std::size_t>(rt.thread_node)] += burst;
        elapsed += burst;
        if (rt.rng.bernoulli(p)) {
            auto hop = static_cast<NodeId>(rt.rng.below(n_nodes - 1));
            if (hop >= rt.thread_node) {
                ++hop;
            }
            rt.thread_node = hop;
        } else {
            rt.thread_node = pref;
        }
    }
    for (auto& v : w) {
        v /= elapsed;
    }
    return w;
}

void Simulator::allocate_by_weights(std::size_t ci, std::size_t si, std::int64_t pages,
                                    double rss_ratio, const std::vector<double>& weights) {
    if (pages <= 0) {
        return;
    }
    const auto shares = apportion(pages, weights);
    const auto& topo = state_.servers[si].topology();
    for (std::size_t n = 0; n < shares.size(); ++n) {
        if (shares[n] > 0) {
            first_touch_allocate(state_.containers[ci], shares[n], rss_ratio,
                                 static_cast<NodeId>(n), topo, state_.ledgers[si]);
        }
    }
}

void Simulator::step() {
    if (finished()) {
        throw std::logic_error("simulation step past configured duration");
    }
    for (std::size_t si = 0; si < state_.servers.size(); ++si) {
        step_server(si, members_[si]);
    }
    state_.clock += config_.tick_s;
    for (std::size_t ci = 0; ci < state_.containers.size(); ++ci) {
        if (state_.runtime[ci].win_len >= config_.window_s - kTimeEps) {
            close_window(ci);
        }
    }
}

void Simulator::step_server(std::size_t si, const std::vector<std::size_t>& members) {
    const auto& topo = state_.servers[si].topology();
    const std::size_t n_nodes = topo.node_count();
    const double tick = config_.tick_s;

    std::vector<std::vector<double>> weights(members.size());
    std::vector<double> demand(members.size(), 0.0);

    for (std::size_t k = 0; k < members.size(); ++k) {
        const std::size_t ci = members[k];
        ContainerInstance& c = state_.containers[ci];
        ContainerRuntime& rt = state_.runtime[ci];
        const auto& profile = cluster::profile_of(catalog_, c.service_id);
        const double load = curves_.at(profile.load_curve_id).at(state_.clock);

        const double jitter = config_.util_jitter * (2.0 * rt.util_rng.uniform() - 1.0);
        c.current_util = std::max(0.0, profile.peak_util * load * (1.0 + jitter));
        demand[k] = profile.bw_demand_peak_gbs * load;

        weights[k] = thread_weights(ci, profile);

        const std::int64_t full = cluster::pages_for_mib(profile.mem_demand_mib);
        const auto target = static_cast<std::int64_t>(
            std::floor(static_cast<double>(full) *
                       (config_.initial_footprint + (1.0 - config_.initial_footprint) * load)));
        const std::int64_t held = c.total_pages();
        if (target > held) {
            allocate_by_weights(ci, si, target - held, profile.rss_ratio, weights[k]);
        }

        rt.turnover_carry += static_cast<double>(c.total_pages()) *
                             config_.page_turnover_per_hour * tick / 3600.0;
        const auto churn = static_cast<std::int64_t>(std::floor(rt.turnover_carry));
        if (churn > 0) {
            rt.turnover_carry -= static_cast<double>(churn);
            const PagePlacement freed = release_pages(c, churn, state_.ledgers[si]);
            std::int64_t freed_total = 0;
            for (std::size_t n = 0; n < n_nodes; ++n) {
                freed_total += freed.rss[n] + freed.cache[n];
            }
            allocate_by_weights(ci, si, freed_total, profile.rss_ratio, weights[k]);
        }
        rt.thread_time = weights[k];
    }

    // Bandwidth lands where the pages are.
    std::vector<double> node_demand(n_nodes, 0.0);
    double server_bw = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
        const ContainerInstance& c = state_.containers[members[k]];
        const std::int64_t total = c.total_pages();
        server_bw += demand[k];
        if (total == 0) {
            continue;
        }
        const auto pages = c.pages_per_node();
        for (std::size_t n = 0; n < n_nodes; ++n) {
            node_demand[n] +=
                demand[k] * static_cast<double>(pages[n]) / static_cast<double>(total);
        }
    }
    std::vector<double> pressure(n_nodes, 0.0);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        pressure[n] = node_demand[n] / topo.nodes()[n].bw_capacity_gbs;
    }

    for (std::size_t k = 0; k < members.size(); ++k) {
        const std::size_t ci = members[k];
        ContainerInstance& c = state_.containers[ci];
        ContainerRuntime& rt = state_.runtime[ci];
        const auto& profile = cluster::profile_of(catalog_, c.service_id);
        const auto& w = weights[k];
        const std::int64_t total = c.total_pages();

        double latency = 0.0;
        double locality = 1.0;
        if (total == 0) {
            const auto n = static_cast<std::size_t>(rt.thread_node);
            latency = effective_latency(1.0, topo.nodes()[n].local_latency_ns,
                                        topo.remote_latency_ns(), pressure[n],
                                        config_.saturation_exponent);
        } else {
            const auto pages = c.pages_per_node();
            locality = 0.0;
            for (std::size_t n = 0; n < n_nodes; ++n) {
                const double share = static_cast<double>(pages[n]) / static_cast<double>(total);
                if (share == 0.0) {
                    continue;
                }
                const double local_here = std::clamp(w[n], 0.0, 1.0);
                latency += share * effective_latency(local_here, topo.nodes()[n].local_latency_ns,
                                                     topo.remote_latency_ns(), pressure[n],
                                                     config_.saturation_exponent);
                locality += share * w[n];
            }
            locality = std::clamp(locality, 0.0, 1.0);
        }

        const double cpi = container_cpi(profile, latency, config_.cpu_freq_ghz);
        const double stall_per_instr = stall_cpi(profile, latency, config_.cpu_freq_ghz);
        const double cycles = c.current_util * profile.cpu_quota * tick * config_.cpu_freq_ghz * 1e9;
        const double stalls = cycles * (stall_per_instr / cpi);

        rt.locality = locality;
        rt.latency_ns = latency;
        rt.cpi = cpi;
        rt.mbw_gbs = demand[k];

        if (rt.win_len == 0.0) {
            rt.win_start = state_.clock;
        }
        rt.win_len += tick;
        rt.win_mbw += tick * demand[k];
        rt.win_remote += tick * demand[k] * (1.0 - locality);
        rt.win_total_bw += tick * server_bw;
        rt.win_cpu += tick * c.current_util;
        rt.win_mem += tick * static_cast<double>(total) /
                      static_cast<double>(cluster::pages_for_mib(profile.mem_demand_mib));
        rt.win_loc += tick * locality;
        rt.win_stall += stalls;
        rt.win_cycles += cycles;
    }
}

void Simulator::close_window(std::size_t ci) {
    ContainerRuntime& rt = state_.runtime[ci];
    if (rt.win_len <= 0.0) {
        return;
    }
    const ContainerInstance& c = state_.containers[ci];
    metrics::MetricsSample s;
    s.window_start = rt.win_start;
    s.duration_s = rt.win_len;
    s.container_id = c.container_id;
    s.service_id = c.service_id;
    s.bound_node = c.bind_state.is_bound() ? c.bind_state.node() : -1;
    s.mbw_gbs = rt.win_mbw / rt.win_len;
    s.remote_bw_gbs = std::min(s.mbw_gbs, rt.win_remote / rt.win_len);
    s.total_bw_gbs = rt.win_total_bw / rt.win_len;
    s.stall_cycles = rt.win_stall;
    s.total_cycles = rt.win_cycles;
    s.rss_pages = c.total_rss_pages();
    s.total_pages = c.total_pages();
    s.cpu_util = rt.win_cpu / rt.win_len;
    s.mem_util = rt.win_mem / rt.win_len;
    s.locality = rt.win_loc / rt.win_len;
    state_.metrics_log.push_back(std::move(s));

    rt.win_len = 0.0;
    rt.win_mbw = rt.win_remote = rt.win_total_bw = 0.0;
    rt.win_cpu = rt.win_mem = rt.win_loc = 0.0;
    rt.win_stall = rt.win_cycles = 0.0;
}

void Simulator::flush_windows() {
    for (std::size_t ci = 0; ci < state_.containers.size(); ++ci) {
        close_window(ci);
    }
}

void Simulator::run_until(double t) {
    while (!finished() && state_.clock + config_.tick_s <= t + kTimeEps) {
        step();
    }
    if (finished()) {
        flush_windows();
    }
}

} // namespace numaopt::sim
