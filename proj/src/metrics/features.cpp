#include <numaopt/metrics/features.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace numaopt::metrics {

namespace {

constexpr double kSlack = 1e-9;

bool in_unit(double v) {
    return v >= 0.0 && v <= 1.0;
}

} // namespace

void MetricsSample::validate() const {
    auto fail = [&](const char* what) {
        throw std::invalid_argument("metrics sample for '" + container_id + "' @" +
                                    std::to_string(window_start) + ": " + what);
    };
    if (mbw_gbs < 0.0 || remote_bw_gbs < 0.0 || total_bw_gbs < 0.0 || stall_cycles < 0.0 ||
        total_cycles < 0.0 || rss_pages < 0 || total_pages < 0 || cpu_util < 0.0 ||
        mem_util < 0.0 || duration_s < 0.0) {
        fail("negative counter");
    }
    if (remote_bw_gbs > mbw_gbs * (1.0 + kSlack) + kSlack) fail("remote_bw exceeds mbw");
    if (stall_cycles > total_cycles * (1.0 + kSlack)) fail("stall_cycles exceed total_cycles");
    if (rss_pages > total_pages) fail("rss_pages exceed total_pages");
}

double FeatureVector::operator[](std::size_t i) const {
    switch (i) {
    case 0:
        return mbw;
    case 1:
        return msr;
    case 2:
        return npmr;
    case 3:
        return rmbr;
    default:
        throw std::out_of_range("feature index " + std::to_string(i));
    }
}

void FeatureVector::validate() const {
    if (!(std::isfinite(mbw) && mbw >= 0.0)) {
        throw std::invalid_argument("feature mbw must be finite and >= 0");
    }
    if (!in_unit(msr) || !in_unit(npmr) || !in_unit(rmbr)) {
        throw std::invalid_argument("features msr/npmr/rmbr must lie in [0,1]");
    }
}

FeatureVector compute_features(const MetricsSample& sample) {
    sample.validate();
    FeatureVector f;
    f.mbw = sample.mbw_gbs;
    f.msr = sample.total_cycles > 0.0
                ? std::clamp(sample.stall_cycles / sample.total_cycles, 0.0, 1.0)
                : 0.0;
    f.npmr = sample.total_pages > 0
                 ? static_cast<double>(sample.rss_pages) / static_cast<double>(sample.total_pages)
                 : 0.0;
    f.rmbr = sample.mbw_gbs > 0.0 ? std::clamp(sample.remote_bw_gbs / sample.mbw_gbs, 0.0, 1.0)
                                  : 0.0;
    return f;
}

std::vector<MetricsSample> aggregate_windows(std::span<const MetricsSample> samples,
                                             double window_s) {
    if (!(window_s > 0.0)) {
        throw std::invalid_argument("aggregate_windows: window must be > 0");
    }
    struct Bucket {
        MetricsSample acc;
        MetricsSample first;
        double weight = 0.0;
        double mbw = 0.0, remote = 0.0, total_bw = 0.0, cpu = 0.0, mem = 0.0, loc = 0.0;
        std::size_t count = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, std::map<long long, Bucket>> by_container;

    for (const auto& s : samples) {
        auto [it, inserted] = by_container.try_emplace(s.container_id);
        if (inserted) {
            order.push_back(s.container_id);
        }
        const auto key = static_cast<long long>(std::floor(s.window_start / window_s + 1e-9));
        Bucket& b = it->second[key];
        if (b.count == 0) {
            b.first = s;
            b.acc = s;
            b.acc.window_start = static_cast<double>(key) * window_s;
            b.acc.duration_s = 0.0;
            b.acc.stall_cycles = 0.0;
            b.acc.total_cycles = 0.0;
        } else if (s.window_start < b.acc.window_start) {
            throw std::invalid_argument("aggregate_windows: samples not time-sorted for '" +
                                        s.container_id + "'");
        }
        // Zero-length sub-samples count with unit weight.
        const double w = s.duration_s > 0.0 ? s.duration_s : 1.0;
        b.weight += w;
        b.mbw += w * s.mbw_gbs;
        b.remote += w * s.remote_bw_gbs;
        b.total_bw += w * s.total_bw_gbs;
        b.cpu += w * s.cpu_util;
        b.mem += w * s.mem_util;
        b.loc += w * s.locality;
        b.acc.duration_s += s.duration_s;
        b.acc.stall_cycles += s.stall_cycles;
        b.acc.total_cycles += s.total_cycles;
        b.acc.rss_pages = s.rss_pages;
        b.acc.total_pages = s.total_pages;
        b.acc.bound_node = s.bound_node;
        ++b.count;
    }

    std::vector<MetricsSample> out;
    for (const auto& id : order) {
        for (auto& [key, b] : by_container[id]) {
            if (b.count == 1) {
                out.push_back(std::move(b.first));
                continue;
            }
            b.acc.mbw_gbs = b.mbw / b.weight;
            b.acc.remote_bw_gbs = b.remote / b.weight;
            b.acc.total_bw_gbs = b.total_bw / b.weight;
            b.acc.cpu_util = b.cpu / b.weight;
            b.acc.mem_util = b.mem / b.weight;
            b.acc.locality = b.loc / b.weight;
            out.push_back(std::move(b.acc));
        }
    }
    return out;
}

ServiceFeatureRecord aggregate_service(std::span<const ContainerFeatures> records) {
    if (records.empty()) {
        throw std::invalid_argument("aggregate_service: no records");
    }
    const std::string& service = records.front().service_id;
    double weight_sum = 0.0;
    for (const auto& r : records) {
        if (r.service_id != service) {
            throw std::invalid_argument("aggregate_service: mixed services '" + service +
                                        "' and '" + r.service_id + "'");
        }
        if (r.cpu_util < 0.0) {
            throw std::invalid_argument("aggregate_service: negative weight");
        }
        weight_sum += r.cpu_util;
    }
    const bool equal_weights = !(weight_sum > 0.0);
    const double n = static_cast<double>(records.size());

    ServiceFeatureRecord out;
    out.service_id = service;
    out.instance_count = records.size();
    double mbw_sum = 0.0;
    for (const auto& r : records) {
        const double w = equal_weights ? 1.0 / n : r.cpu_util / weight_sum;
        mbw_sum += r.features.mbw;
        out.features.msr += w * r.features.msr;
        out.features.npmr += w * r.features.npmr;
        out.features.rmbr += w * r.features.rmbr;
    }
    out.features.mbw = mbw_sum / n;
    out.features.msr = std::clamp(out.features.msr, 0.0, 1.0);
    out.features.npmr = std::clamp(out.features.npmr, 0.0, 1.0);
    out.features.rmbr = std::clamp(out.features.rmbr, 0.0, 1.0);
    return out;
}

std::vector<ServiceFeatureRecord> service_features(std::span<const MetricsSample> samples) {
    // (window_start, service) -> per-container features
    std::map<std::pair<double, std::string>, std::vector<ContainerFeatures>> groups;
    std::map<std::pair<double, std::string>, double> window_ends;
    for (const auto& s : samples) {
        const auto key = std::make_pair(s.window_start, s.service_id);
        groups[key].push_back(
            ContainerFeatures{s.service_id, s.container_id, compute_features(s), s.cpu_util});
        auto& end = window_ends[key];
        end = std::max(end, s.window_start + s.duration_s);
    }
    std::vector<ServiceFeatureRecord> out;
    out.reserve(groups.size());
    for (const auto& [key, recs] : groups) {
        ServiceFeatureRecord r = aggregate_service(recs);
        r.window_start = key.first;
        r.window_end = window_ends[key];
        out.push_back(std::move(r));
    }
    return out;
}

double window_cpi(const MetricsSample& sample, double compute_cpi) {
    const double busy = sample.total_cycles - sample.stall_cycles;
    if (!(sample.total_cycles > 0.0) || !(busy > 0.0)) {
        return compute_cpi;
    }
    return compute_cpi * sample.total_cycles / busy;
}

} // namespace numaopt::metrics
