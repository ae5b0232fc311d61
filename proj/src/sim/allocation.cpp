#include <numaopt/sim/allocation.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace numaopt::sim {

using cluster::NodeId;

NodeMemoryLedger::NodeMemoryLedger(const cluster::NumaTopology& topology) {
    for (const auto& n : topology.nodes()) {
        capacity_.push_back(cluster::pages_for_mib(n.mem_capacity_mib));
        used_.push_back(0);
    }
}

std::int64_t NodeMemoryLedger::total_free() const noexcept {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < capacity_.size(); ++i) {
        total += capacity_[i] - used_[i];
    }
    return total;
}

void NodeMemoryLedger::take(NodeId n, std::int64_t pages) {
    if (pages < 0 || pages > free(n)) {
        throw AllocationError("node " + std::to_string(n) + " cannot supply " +
                              std::to_string(pages) + " pages");
    }
    used_.at(idx(n)) += pages;
}

void NodeMemoryLedger::give_back(NodeId n, std::int64_t pages) {
    if (pages < 0 || pages > used(n)) {
        throw std::logic_error("node " + std::to_string(n) + " releasing more than it holds");
    }
    used_.at(idx(n)) -= pages;
}

std::vector<std::int64_t> apportion(std::int64_t total, std::span<const double> weights) {
    if (total < 0) {
        throw std::invalid_argument("apportion: negative total");
    }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0)) {
        throw std::invalid_argument("apportion: weights must have a positive sum");
    }
    std::vector<std::int64_t> parts(weights.size(), 0);
    std::vector<double> remainder(weights.size(), 0.0);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) {
            throw std::invalid_argument("apportion: negative weight");
        }
        const double exact = static_cast<double>(total) * (weights[i] / sum);
        parts[i] = static_cast<std::int64_t>(std::floor(exact));
        remainder[i] = exact - static_cast<double>(parts[i]);
        assigned += parts[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    // Floating error can leave the floors one off in either direction.
    for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
        if (weights[order[k]] > 0.0) {
            ++parts[order[k]];
            ++assigned;
        }
    }
    for (std::size_t k = order.size(); assigned > total && k-- > 0;) {
        if (parts[order[k]] > 0) {
            --parts[order[k]];
            --assigned;
        }
    }
    return parts;
}

PagePlacement first_touch_allocate(cluster::ContainerInstance& container, std::int64_t pages,
                                   double rss_ratio, NodeId running_node,
                                   const cluster::NumaTopology& topology,
                                   NodeMemoryLedger& ledger) {
    if (pages < 0) {
        throw std::invalid_argument("first_touch_allocate: negative page count");
    }
    if (!(rss_ratio >= 0.0 && rss_ratio <= 1.0)) {
        throw std::invalid_argument("first_touch_allocate: rss_ratio must be in [0,1]");
    }
    if (!topology.contains(running_node)) {
        throw std::invalid_argument("first_touch_allocate: unknown running node");
    }
    const std::size_t n_nodes = topology.node_count();
    if (container.rss_pages.size() != n_nodes || container.cache_pages.size() != n_nodes ||
        ledger.node_count() != n_nodes) {
        throw std::invalid_argument("first_touch_allocate: container/topology node mismatch");
    }
    if (pages > ledger.total_free()) {
        throw AllocationError("container '" + container.container_id + "': " +
                              std::to_string(pages) + " pages requested, " +
                              std::to_string(ledger.total_free()) + " free on server");
    }

    std::vector<std::int64_t> free(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        free[n] = ledger.free(static_cast<NodeId>(n));
    }
    PagePlacement placed{std::vector<std::int64_t>(n_nodes, 0),
                         std::vector<std::int64_t>(n_nodes, 0)};

    const auto rss = static_cast<std::int64_t>(std::llround(static_cast<double>(pages) * rss_ratio));
    std::int64_t remaining = rss;
    auto put_rss = [&](std::size_t n) {
        const std::int64_t g = std::min(remaining, free[n]);
        placed.rss[n] += g;
        free[n] -= g;
        remaining -= g;
    };
    put_rss(static_cast<std::size_t>(running_node));
    while (remaining > 0) {
        std::size_t best = 0;
        for (std::size_t n = 1; n < n_nodes; ++n) {
            if (free[n] > free[best]) {
                best = n;
            }
        }
        put_rss(best);
    }

    remaining = pages - rss;
    std::size_t cursor = container.cache_cursor % n_nodes;
    while (remaining > 0) {
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const std::size_t n = (cursor + i) % n_nodes;
            if (free[n] > 0) {
                active.push_back(n);
            }
        }
        const auto k = static_cast<std::int64_t>(active.size());
        const std::int64_t per = remaining / k;
        if (per == 0) {
            for (std::int64_t j = 0; j < remaining; ++j) {
                const std::size_t n = active[static_cast<std::size_t>(j)];
                placed.cache[n] += 1;
                free[n] -= 1;
            }
            cursor = (active[static_cast<std::size_t>(remaining - 1)] + 1) % n_nodes;
            remaining = 0;
        } else {
            for (std::size_t n : active) {
                const std::int64_t g = std::min(per, free[n]);
                placed.cache[n] += g;
                free[n] -= g;
                remaining -= g;
            }
        }
    }

    for (std::size_t n = 0; n < n_nodes; ++n) {
        ledger.take(static_cast<NodeId>(n), placed.rss[n] + placed.cache[n]);
        container.rss_pages[n] += placed.rss[n];
        container.cache_pages[n] += placed.cache[n];
    }
    container.cache_cursor = cursor;
    return placed;
}

PagePlacement release_pages(cluster::ContainerInstance& container, std::int64_t pages,
                            NodeMemoryLedger& ledger) {
    const std::size_t n_nodes = container.rss_pages.size();
    PagePlacement freed{std::vector<std::int64_t>(n_nodes, 0),
                        std::vector<std::int64_t>(n_nodes, 0)};
    if (pages == 0) {
        return freed;
    }
    const std::int64_t held = container.total_pages();
    if (pages < 0 || pages > held) {
        throw std::invalid_argument("release_pages: cannot free " + std::to_string(pages) +
                                    " of " + std::to_string(held) + " pages");
    }
    std::vector<double> weights;
    weights.reserve(2 * n_nodes);
    for (auto p : container.rss_pages) weights.push_back(static_cast<double>(p));
    for (auto p : container.cache_pages) weights.push_back(static_cast<double>(p));
    const auto parts = apportion(pages, weights);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        freed.rss[n] = std::min(parts[n], container.rss_pages[n]);
        freed.cache[n] = std::min(parts[n_nodes + n], container.cache_pages[n]);
        container.rss_pages[n] -= freed.rss[n];
        container.cache_pages[n] -= freed.cache[n];
        ledger.give_back(static_cast<NodeId>(n), freed.rss[n] + freed.cache[n]);
    }
    return freed;
}

} // namespace numaopt::sim
