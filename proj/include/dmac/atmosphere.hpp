#pragma once

namespace dmac {

inline constexpr double kGasConstantAir = 287.0528741;  // J/(kg K)
inline constexpr double kGammaAir = 1.4;

/// Static pressure [Pa] and temperature [K] from the 1976 US Standard
/// Atmosphere, layers 0-3 (geometric altitude 0..47 km). Throws
/// std::invalid_argument outside that range.
struct AtmosphereState {
    double pressure;
    double temperature;
};

AtmosphereState standard_atmosphere(double altitude_m);

/// Freestream condition at a cruise point: statics from the standard
/// atmosphere, totals from the isentropic relations at gamma = 1.4.
struct FlightCondition {
    double mach;
    double altitude;  // m
    double p0;        // Pa, static
    double t0;        // K, static
    double pt0;       // Pa, total
    double tt0;       // K, total
    double u0;        // m/s
};

FlightCondition make_flight_condition(double mach, double altitude_m);

}  // namespace dmac
