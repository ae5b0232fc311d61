#pragma once

#include <array>
#include <utility>

namespace numaopt::sim {

/// Measured page-migration cost: (migrated MiB, seconds of one 2.7 GHz core
/// at 100% utilization).
inline constexpr std::array<std::pair<double, double>, 10> kMigrationCostTable{{
    {16.0, 0.007919},
    {32.0, 0.020367},
    {51.0, 0.033931},
    {64.0, 0.041946},
    {128.0, 0.083136},
    {256.0, 0.162868},
    {512.0, 0.322639},
    {1024.0, 0.644564},
    {2048.0, 1.272319},
    {2560.0, 1.583247},
}};

/// Seconds to migrate `mib` of pages: piecewise-linear through (0,0) and the
/// table knots, extrapolated past the last knot with the last segment's
/// slope. Throws std::invalid_argument for negative or non-finite sizes.
double migration_cost(double mib);

} // namespace numaopt::sim
