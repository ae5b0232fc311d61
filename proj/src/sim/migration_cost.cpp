#include <numaopt/sim/migration_cost.hpp>

#include <cmath>
#include <stdexcept>

namespace numaopt::sim {

double migration_cost(double mib) {
    if (!std::isfinite(mib) || mib < 0.0) {
        throw std::invalid_argument("migration_cost: size must be finite and >= 0");
    }
    double x0 = 0.0;
    double y0 = 0.0;
    for (const auto& [x1, y1] : kMigrationCostTable) {
        if (mib == x1) {
            return y1; // exact at knots
        }
        if (mib < x1) {
            return y0 + (y1 - y0) * (mib - x0) / (x1 - x0);
        }
        x0 = x1;
        y0 = y1;
    }
    const auto& [xa, ya] = kMigrationCostTable[kMigrationCostTable.size() - 2];
    const auto& [xb, yb] = kMigrationCostTable.back();
    return yb + (yb - ya) / (xb - xa) * (mib - xb);
}

} // namespace numaopt::sim
