#include "dmac/atmosphere.hpp"

#include <cmath>
#include <stdexcept>

namespace dmac {

namespace {

constexpr double kG0 = 9.80665;        // m/s^2
constexpr double kEarthRadius = 6356766.0;  // m, 1976 standard value

struct Layer {
    double base_alt;   // geopotential m
    double base_temp;  // K
    double lapse;      // K/m
};

// Layers 0-3: troposphere, tropopause, and the two lower-stratosphere
// segments. Base pressures are computed on the fly from sea level.
constexpr Layer kLayers[] = {
    {0.0, 288.15, -0.0065},
    {11000.0, 216.65, 0.0},
    {20000.0, 216.65, 0.001},
    {32000.0, 228.65, 0.0028},
};
constexpr double kTopAlt = 47000.0;

}  // namespace

AtmosphereState standard_atmosphere(double altitude_m) {
    if (!(altitude_m >= 0.0 && altitude_m <= kTopAlt)) {
        throw std::invalid_argument(
            "standard_atmosphere: altitude must lie in [0, 47000] m");
    }
    // geometric -> geopotential
    const double h = kEarthRadius * altitude_m / (kEarthRadius + altitude_m);

    double pressure = 101325.0;
    double temperature = 288.15;
    for (int i = 0; i < 4; ++i) {
        const Layer& layer = kLayers[i];
        const double top = (i < 3) ? kLayers[i + 1].base_alt : kTopAlt;
        const double seg = std::min(h, top) - layer.base_alt;
        if (seg < 0.0) break;
        if (layer.lapse == 0.0) {
            temperature = layer.base_temp;
            pressure *= std::exp(-kG0 * seg / (kGasConstantAir * layer.base_temp));
        } else {
            temperature = layer.base_temp + layer.lapse * seg;
            pressure *= std::pow(temperature / layer.base_temp,
                                 -kG0 / (layer.lapse * kGasConstantAir));
        }
        if (h <= top) break;
    }
    return {pressure, temperature};
}

FlightCondition make_flight_condition(double mach, double altitude_m) {
    if (!(mach > 0.0)) {
        throw std::invalid_argument("make_flight_condition: mach must be positive");
    }
    const AtmosphereState atm = standard_atmosphere(altitude_m);
    const double m2 = mach * mach;
    const double ratio = 1.0 + 0.5 * (kGammaAir - 1.0) * m2;

    FlightCondition fc;
    fc.mach = mach;
    fc.altitude = altitude_m;
    fc.p0 = atm.pressure;
    fc.t0 = atm.temperature;
    fc.tt0 = atm.temperature * ratio;
    fc.pt0 = atm.pressure * std::pow(ratio, kGammaAir / (kGammaAir - 1.0));
    fc.u0 = mach * std::sqrt(kGammaAir * kGasConstantAir * atm.temperature);
    return fc;
}

}  // namespace dmac
