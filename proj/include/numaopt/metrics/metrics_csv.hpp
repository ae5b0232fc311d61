#pragma once

#include <numaopt/metrics/features.hpp>

#include <iosfwd>
#include <span>
#include <vector>

namespace numaopt::metrics {

/// Columns: window_start, container_id, service_id, bound_node, mbw_gbs,
/// stall_cycles, total_cycles, rss_pages, total_pages, remote_bw_gbs,
/// total_bw_gbs, cpu_util, locality. bound_node is -1 for unbound windows.
void write_metrics_csv(std::ostream& out, std::span<const MetricsSample> samples);

/// Inverse of write_metrics_csv. The file carries no window length, so each
/// sample's duration is the smallest positive spacing between window starts
/// (or `default_window_s` when there is only one start). Throws
/// csv::ParseError with the row number on malformed rows.
std::vector<MetricsSample> read_metrics_csv(std::istream& in, double default_window_s = 60.0);

/// Columns: service_id, window_start, mbw, msr, npmr, rmbr.
void write_features_csv(std::ostream& out, std::span<const ServiceFeatureRecord> records);

} // namespace numaopt::metrics
