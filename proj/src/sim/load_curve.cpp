#include <numaopt/sim/load_curve.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace numaopt::sim {

void LoadCurve::validate() const {
    double peak = 0.0;
    for (double v : hourly) {
        if (!(v > 0.0 && v <= 1.0)) {
            throw std::invalid_argument("load curve '" + curve_id +
                                        "': samples must lie in (0,1]");
        }
        peak = std::max(peak, v);
    }
    if (peak != 1.0) {
        throw std::invalid_argument("load curve '" + curve_id + "': must be peak-normalized");
    }
}

double LoadCurve::at(double t_seconds) const {
    const double hours = std::fmod(std::max(0.0, t_seconds) / 3600.0, 24.0);
    const auto h0 = static_cast<std::size_t>(hours);
    const std::size_t h1 = (h0 + 1) % 24;
    const double frac = hours - static_cast<double>(h0);
    return hourly[h0] + (hourly[h1] - hourly[h0]) * frac;
}

LoadCurveSet builtin_load_curves() {
    LoadCurveSet set;
    LoadCurve flat{"flat", {}};
    flat.hourly.fill(1.0);
    set.emplace(flat.curve_id, flat);

    LoadCurve diurnal{"diurnal",
                      {0.55, 0.45, 0.40, 0.36, 0.35, 0.38, 0.45, 0.55, 0.65, 0.72, 0.78, 0.82,
                       0.85, 0.83, 0.80, 0.80, 0.82, 0.86, 0.90, 0.95, 1.00, 0.98, 0.85, 0.70}};
    set.emplace(diurnal.curve_id, diurnal);
    return set;
}

} // namespace numaopt::sim
