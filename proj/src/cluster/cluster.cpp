#include <numaopt/cluster/cluster.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace numaopt::cluster {

std::string BindState::to_string() const {
    if (!node_) {
        return "unbound";
    }
    return "bound:" + std::to_string(*node_);
}

BindState BindState::parse(const std::string& text) {
    if (text == "unbound") {
        return unbound();
    }
    constexpr std::string_view prefix = "bound:";
    if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
        std::size_t used = 0;
        const std::string digits = text.substr(prefix.size());
        int node = -1;
        try {
            node = std::stoi(digits, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == digits.size() && node >= 0) {
            return bound(node);
        }
    }
    throw std::invalid_argument("bad bind state '" + text + "'");
}

void ServiceProfile::validate() const {
    auto fail = [&](const char* field, const char* rule) {
        throw std::invalid_argument("service '" + service_id + "': " + field + " " + rule);
    };
    if (service_id.empty()) {
        throw std::invalid_argument("service_id must be non-empty");
    }
    if (!(cpu_quota > 0.0)) fail("cpu_quota", "must be > 0");
    if (!(mem_demand_mib > 0.0)) fail("mem_demand_mib", "must be > 0");
    if (!(rss_ratio >= 0.0 && rss_ratio <= 1.0)) fail("rss_ratio", "must be in [0,1]");
    if (!(bw_demand_peak_gbs >= 0.0)) fail("bw_demand_peak_gbs", "must be >= 0");
    if (!(compute_cpi > 0.0)) fail("compute_cpi", "must be > 0");
    if (!(mem_access_intensity >= 0.0)) fail("mem_access_intensity", "must be >= 0");
    if (!(burst_ms_low > 0.0)) fail("burst_ms", "lower bound must be > 0");
    if (!(burst_ms_high >= burst_ms_low)) fail("burst_ms", "upper bound must be >= lower bound");
    if (!(peak_util > 0.0)) fail("peak_util", "must be > 0");
    if (load_curve_id.empty()) fail("load_curve", "must be non-empty");
}

const ServiceProfile& profile_of(const ServiceCatalog& catalog, const std::string& service_id) {
    auto it = catalog.find(service_id);
    if (it == catalog.end()) {
        throw std::out_of_range("unknown service '" + service_id + "'");
    }
    return it->second;
}

std::vector<std::int64_t> ContainerInstance::pages_per_node() const {
    std::vector<std::int64_t> out(rss_pages.size(), 0);
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = rss_pages[n] + (n < cache_pages.size() ? cache_pages[n] : 0);
    }
    return out;
}

std::int64_t ContainerInstance::total_pages() const noexcept {
    return total_rss_pages() + std::accumulate(cache_pages.begin(), cache_pages.end(),
                                               std::int64_t{0});
}

std::int64_t ContainerInstance::total_rss_pages() const noexcept {
    return std::accumulate(rss_pages.begin(), rss_pages.end(), std::int64_t{0});
}

ContainerInstance make_instance(std::string container_id, std::string service_id,
                                std::string server_id, const NumaTopology& topology,
                                BindState bind_state, NodeId home_node) {
    if (bind_state.is_bound() && !topology.contains(bind_state.node())) {
        throw std::invalid_argument("container '" + container_id + "' bound to unknown node");
    }
    if (!topology.contains(home_node)) {
        throw std::invalid_argument("container '" + container_id + "' has unknown home node");
    }
    ContainerInstance c;
    c.container_id = std::move(container_id);
    c.service_id = std::move(service_id);
    c.server_id = std::move(server_id);
    c.bind_state = bind_state;
    c.home_node = home_node;
    c.rss_pages.assign(topology.node_count(), 0);
    c.cache_pages.assign(topology.node_count(), 0);
    return c;
}

Server::Server(std::string server_id, NumaTopology topology)
    : server_id_(std::move(server_id))
    , topology_(std::move(topology)) {}

void Server::host(const std::string& container_id) {
    if (hosts(container_id)) {
        throw std::invalid_argument("container '" + container_id + "' already hosted on " +
                                    server_id_);
    }
    hosted_.push_back(container_id);
}

void Server::evict(const std::string& container_id) {
    std::erase(hosted_, container_id);
}

bool Server::hosts(const std::string& container_id) const noexcept {
    return std::find(hosted_.begin(), hosted_.end(), container_id) != hosted_.end();
}

double cores_used(const ContainerInstance& instance, const ServiceCatalog& catalog) {
    return instance.current_util * profile_of(catalog, instance.service_id).cpu_quota;
}

namespace {

// Core usage attributed to each node; unbound usage is split evenly.
std::vector<double> node_core_usage(const Server& server,
                                    std::span<const ContainerInstance> instances,
                                    const ServiceCatalog& catalog) {
    const std::size_t n_nodes = server.topology().node_count();
    std::vector<double> usage(n_nodes, 0.0);
    for (const auto& c : instances) {
        if (c.server_id != server.server_id()) {
            continue;
        }
        const double used = cores_used(c, catalog);
        if (c.bind_state.is_bound()) {
            usage[static_cast<std::size_t>(c.bind_state.node())] += used;
        } else {
            const double share = used / static_cast<double>(n_nodes);
            for (auto& u : usage) {
                u += share;
            }
        }
    }
    return usage;
}

} // namespace

double node_utilization(const Server& server, NodeId node_id,
                        std::span<const ContainerInstance> instances,
                        const ServiceCatalog& catalog) {
    const NumaNode& node = server.topology().node(node_id);
    const auto usage = node_core_usage(server, instances, catalog);
    return usage[static_cast<std::size_t>(node_id)] / static_cast<double>(node.cores);
}

std::vector<double> node_utilizations(const Server& server,
                                      std::span<const ContainerInstance> instances,
                                      const ServiceCatalog& catalog) {
    auto usage = node_core_usage(server, instances, catalog);
    for (std::size_t n = 0; n < usage.size(); ++n) {
        usage[n] /= static_cast<double>(server.topology().nodes()[n].cores);
    }
    return usage;
}

double locality_ratio(std::span<const std::int64_t> pages_per_node,
                      std::span<const double> thread_time) {
    if (pages_per_node.size() != thread_time.size()) {
        throw std::invalid_argument("locality_ratio: page and thread-time node counts differ");
    }
    double weight_sum = 0.0;
    for (double w : thread_time) {
        if (w < 0.0) {
            throw std::invalid_argument("locality_ratio: negative thread-time weight");
        }
        weight_sum += w;
    }
    if (std::fabs(weight_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("locality_ratio: thread-time weights must sum to 1");
    }
    const auto total = std::accumulate(pages_per_node.begin(), pages_per_node.end(),
                                       std::int64_t{0});
    if (total == 0) {
        return 1.0; // nothing to access, nothing remote
    }
    double local = 0.0;
    for (std::size_t n = 0; n < pages_per_node.size(); ++n) {
        local += static_cast<double>(pages_per_node[n]) / static_cast<double>(total) *
                 thread_time[n];
    }
    return std::clamp(local, 0.0, 1.0);
}

double locality_ratio(const ContainerInstance& container, std::span<const double> thread_time) {
    const auto pages = container.pages_per_node();
    return locality_ratio(std::span<const std::int64_t>{pages}, thread_time);
}

} // namespace numaopt::cluster
