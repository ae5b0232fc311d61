#pragma once

#include <array>
#include <map>
#include <string>

namespace numaopt::sim {

/// 24 hourly load multipliers, peak-normalized (max == 1.0).
struct LoadCurve {
    std::string curve_id;
    std::array<double, 24> hourly{};

    /// Throws std::invalid_argument unless all samples are in (0,1] and the
    /// maximum is exactly 1.
    void validate() const;

    /// Multiplier at simulated time `t` seconds, linearly interpolated between
    /// hourly samples and wrapping every 24 h.
    double at(double t_seconds) const;
};

using LoadCurveSet = std::map<std::string, LoadCurve>;

/// "flat" (constant 1.0) and "diurnal" (valley around 04:00, peak at 20:00).
LoadCurveSet builtin_load_curves();

} // namespace numaopt::sim
