#pragma once

#include <numaopt/cluster/cluster.hpp>

namespace numaopt::sim {

/// Average DRAM latency (ns) for a given local-access fraction:
/// (locality * local + (1 - locality) * remote) * max(1, pressure)^exponent,
/// where pressure is bandwidth demand over capacity of the serving node.
double effective_latency(double locality, double local_latency_ns, double remote_latency_ns,
                         double node_bw_pressure, double saturation_exponent = 1.0);

/// Same, with latencies taken from node 0 of a homogeneous topology.
double effective_latency(double locality, const cluster::NumaTopology& topology,
                         double node_bw_pressure, double saturation_exponent = 1.0);

/// Memory-stall cycles per instruction: intensity * latency * frequency.
double stall_cpi(const cluster::ServiceProfile& profile, double avg_latency_ns,
                 double cpu_freq_ghz);

/// compute_cpi + stall_cpi.
double container_cpi(const cluster::ServiceProfile& profile, double avg_latency_ns,
                     double cpu_freq_ghz);

} // namespace numaopt::sim
