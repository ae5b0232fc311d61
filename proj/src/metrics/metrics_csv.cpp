#include <numaopt/metrics/metrics_csv.hpp>

#include <numaopt/common/csv.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace numaopt::metrics {

using csv::format_double;

void write_metrics_csv(std::ostream& out, std::span<const MetricsSample> samples) {
    out << "window_start,container_id,service_id,bound_node,mbw_gbs,stall_cycles,total_cycles,"
           "rss_pages,total_pages,remote_bw_gbs,total_bw_gbs,cpu_util,locality\n";
    for (const auto& s : samples) {
        out << format_double(s.window_start) << ',' << s.container_id << ',' << s.service_id
            << ',' << s.bound_node << ',' << format_double(s.mbw_gbs) << ','
            << format_double(s.stall_cycles) << ',' << format_double(s.total_cycles) << ','
            << s.rss_pages << ',' << s.total_pages << ',' << format_double(s.remote_bw_gbs)
            << ',' << format_double(s.total_bw_gbs) << ',' << format_double(s.cpu_util) << ','
            << format_double(s.locality) << '\n';
    }
}

std::vector<MetricsSample> read_metrics_csv(std::istream& in, double default_window_s) {
    csv::Reader reader(in, {"window_start", "container_id", "service_id", "bound_node",
                            "mbw_gbs", "stall_cycles", "total_cycles", "rss_pages",
                            "total_pages", "remote_bw_gbs", "total_bw_gbs", "cpu_util",
                            "locality"});
    std::vector<MetricsSample> out;
    while (reader.next()) {
        MetricsSample s;
        s.window_start = reader.number("window_start");
        s.container_id = reader.text("container_id");
        s.service_id = reader.text("service_id");
        s.bound_node = static_cast<int>(reader.integer("bound_node"));
        s.mbw_gbs = reader.number("mbw_gbs");
        s.stall_cycles = reader.number("stall_cycles");
        s.total_cycles = reader.number("total_cycles");
        s.rss_pages = reader.integer("rss_pages");
        s.total_pages = reader.integer("total_pages");
        s.remote_bw_gbs = reader.number("remote_bw_gbs");
        s.total_bw_gbs = reader.number("total_bw_gbs");
        s.cpu_util = reader.number("cpu_util");
        s.locality = reader.number("locality");
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw csv::ParseError(reader.row_number(), e.what());
        }
        out.push_back(std::move(s));
    }

    double spacing = std::numeric_limits<double>::infinity();
    std::vector<double> starts;
    starts.reserve(out.size());
    for (const auto& s : out) {
        starts.push_back(s.window_start);
    }
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 1; i < starts.size(); ++i) {
        const double d = starts[i] - starts[i - 1];
        if (d > 0.0) {
            spacing = std::min(spacing, d);
        }
    }
    if (!std::isfinite(spacing)) {
        spacing = default_window_s;
    }
    for (auto& s : out) {
        s.duration_s = spacing;
    }
    return out;
}

void write_features_csv(std::ostream& out, std::span<const ServiceFeatureRecord> records) {
    out << "service_id,window_start,mbw,msr,npmr,rmbr\n";
    for (const auto& r : records) {
        out << r.service_id << ',' << format_double(r.window_start) << ','
            << format_double(r.features.mbw) << ',' << format_double(r.features.msr) << ','
            << format_double(r.features.npmr) << ',' << format_double(r.features.rmbr) << '\n';
    }
}

} // namespace numaopt::metrics
