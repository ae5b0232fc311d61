#include <numaopt/sim/performance.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace numaopt::sim {

double effective_latency(double locality, double local_latency_ns, double remote_latency_ns,
                         double node_bw_pressure, double saturation_exponent) {
    if (!(locality >= 0.0 && locality <= 1.0)) {
        throw std::invalid_argument("effective_latency: locality must be in [0,1]");
    }
    if (!(node_bw_pressure >= 0.0)) {
        throw std::invalid_argument("effective_latency: pressure must be >= 0");
    }
    const double base = locality * local_latency_ns + (1.0 - locality) * remote_latency_ns;
    const double pressure = std::max(1.0, node_bw_pressure);
    if (pressure == 1.0) {
        return base;
    }
    return base * std::pow(pressure, saturation_exponent);
}

double effective_latency(double locality, const cluster::NumaTopology& topology,
                         double node_bw_pressure, double saturation_exponent) {
    return effective_latency(locality, topology.node(0).local_latency_ns,
                             topology.remote_latency_ns(), node_bw_pressure,
                             saturation_exponent);
}

double stall_cpi(const cluster::ServiceProfile& profile, double avg_latency_ns,
                 double cpu_freq_ghz) {
    if (!(avg_latency_ns > 0.0)) {
        throw std::invalid_argument("container_cpi: latency must be > 0");
    }
    return profile.mem_access_intensity * avg_latency_ns * cpu_freq_ghz;
}

double container_cpi(const cluster::ServiceProfile& profile, double avg_latency_ns,
                     double cpu_freq_ghz) {
    return profile.compute_cpi + stall_cpi(profile, avg_latency_ns, cpu_freq_ghz);
}

} // namespace numaopt::sim
