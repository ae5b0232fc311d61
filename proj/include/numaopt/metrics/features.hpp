#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace numaopt::metrics {

/// Counters for one container over one window, as the Monitor would report.
struct MetricsSample {
    double window_start = 0.0;    // seconds
    double duration_s = 0.0;      // window length
    std::string container_id;
    std::string service_id;
    int bound_node = -1;          // -1 when unbound
    double mbw_gbs = 0.0;         // Total_Memory_Bandwidth
    double remote_bw_gbs = 0.0;   // Remote_Memory_bandwidth
    double total_bw_gbs = 0.0;    // aggregate DRAM bandwidth of the whole server
    double stall_cycles = 0.0;    // Memory_Stall_Cycles
    double total_cycles = 0.0;    // CPU_CLK_UNHALTED.THREAD
    std::int64_t rss_pages = 0;   // NUMA.Page_RSS
    std::int64_t total_pages = 0; // NUMA.Page_Total
    double cpu_util = 0.0;        // fraction of quota
    double mem_util = 0.0;        // footprint / mem_demand
    double locality = 0.0;        // local access ratio

    /// Throws std::invalid_argument if a counter invariant is violated.
    void validate() const;
};

enum class Feature : std::size_t { mbw = 0, msr = 1, npmr = 2, rmbr = 3 };

inline constexpr std::size_t kFeatureCount = 4;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{"mbw", "msr", "npmr",
                                                                           "rmbr"};

/// The four NUMA-sensitivity features.
struct FeatureVector {
    double mbw = 0.0;  // GB/s
    double msr = 0.0;  // memory stall cycles / unhalted cycles
    double npmr = 0.0; // mapped (non page-cache) pages / all pages
    double rmbr = 0.0; // remote bandwidth / total bandwidth

    double operator[](std::size_t i) const;
    double operator[](Feature f) const { return (*this)[static_cast<std::size_t>(f)]; }
    std::array<double, kFeatureCount> as_array() const { return {mbw, msr, npmr, rmbr}; }
    static FeatureVector from_array(const std::array<double, kFeatureCount>& a) {
        return {a[0], a[1], a[2], a[3]};
    }

    /// Throws std::invalid_argument if a ratio is outside [0,1] or mbw < 0.
    void validate() const;

    bool operator==(const FeatureVector&) const = default;
};

/// Zero denominators yield 0 for the corresponding ratio.
FeatureVector compute_features(const MetricsSample& sample);

/// Re-buckets per-container samples into windows of `window_s` seconds:
/// counters summed, bandwidths/utilizations/locality time-weighted, page
/// counts taken from the last sub-sample. Output order: container first-seen
/// order, then window start.
std::vector<MetricsSample> aggregate_windows(std::span<const MetricsSample> samples,
                                             double window_s);

struct ContainerFeatures {
    std::string service_id;
    std::string container_id;
    FeatureVector features;
    double cpu_util = 0.0; // aggregation weight
};

struct ServiceFeatureRecord {
    std::string service_id;
    double window_start = 0.0;
    double window_end = 0.0;
    FeatureVector features;
    std::size_t instance_count = 0;
};

/// Utilization-weighted mean of msr/npmr/rmbr (equal weights if all
/// utilizations are zero); mbw is the per-instance mean. Throws on empty
/// input or mixed services.
ServiceFeatureRecord aggregate_service(std::span<const ContainerFeatures> records);

/// Features per (service, window) over a metrics log, ordered by window then
/// service id.
std::vector<ServiceFeatureRecord> service_features(std::span<const MetricsSample> samples);

/// CPI implied by the window counters for a service with the given compute
/// CPI: total / (total - stall) * compute_cpi. Equals compute_cpi for idle
/// windows.
double window_cpi(const MetricsSample& sample, double compute_cpi);

} // namespace numaopt::metrics
