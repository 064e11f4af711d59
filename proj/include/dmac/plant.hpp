#pragma once

#include <stdexcept>
#include <string>

#include "dmac/atmosphere.hpp"

namespace dmac {

/// Raised when the operating point leaves the model's validity region
/// (combustor pressure collapse, nozzle unable to expand). Trials hitting
/// this are recorded as diverged, not aborted.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Engine geometry. Defaults: cowl radius 47.88-59.28 mm, combustor
/// entrance 46.7 mm, fuel port 59.2-68.6 mm, throat 50.4 mm, grain 500 mm.
struct SfrjGeometry {
    double r0_min = 0.04788;   // m
    double r0_max = 0.05928;   // m
    double r0_nominal = 0.05358;  // m
    double r2 = 0.0467;        // m
    double r3_init = 0.0592;   // m
    double r3_max = 0.0686;    // m
    double rt = 0.0504;        // m
    double lf = 0.5;           // m
};

/// Solid-fuel (HTPB -> 1,3-butadiene) model plus the analytic surrogates
/// standing in for the equilibrium chemistry:
///   - regression law rdot = alpha * G^a * P4^b * Tt2^c (SI units),
///   - heat release t4_eq = t2 + dt_peak * phi*(2-phi) on phi in [0,2],
///   - CO fraction x_co_max * sigmoid((phi-1)/co_width),
///   - gamma4 linear in t4_eq from 1.33 @ 1000 K to 1.25 @ 2800 K.
struct FuelModel {
    double rho_f = 900.0;      // kg/m^3
    double alpha = 4.44e-7;    // regression prefactor
    double alpha_scale = 1.0;  // calibration multiplier on alpha
    double a = 0.4;            // mass-flux exponent
    double b = 0.1;            // pressure exponent
    double c = 1.0 / 3.0;      // total-temperature exponent
    // C4H6 + 5.5 O2 -> 4 CO2 + 3 H2O, air at 23.2% O2 by mass
    double f_stoich = 54.092 / (5.5 * 31.998 / 0.232);
    double eta_c = 0.75;       // combustion efficiency
    double eta_n = 0.95;       // nozzle velocity coefficient
    double dt_peak = 2100.0;   // K, surrogate peak temperature rise
    double x_co_max = 0.15;    // mole fraction at the rich limit
    double co_width = 0.2;     // sigmoid width in phi
    double r4 = 288.0;         // J/(kg K), aft-end gas constant
    double darcy_f = 0.03;     // Darcy friction factor
    double m2 = 0.3;           // isolator exit Mach (subsonic, fixed)
};

struct PlantState {
    double r3;           // m, current port radius
    double time = 0.0;   // s
    bool burned_out = false;
};

struct PlantOutputs {
    double thrust;     // N
    double pt4;        // Pa, aft total pressure
    double x_co;       // mole fraction
    double mdot_air;   // kg/s
    double mdot_f;     // kg/s
    double phi_g;      // equivalence ratio
    double t4;         // K
    double ue;         // m/s
    double rdot;       // m/s
};

struct InletState {
    double mdot_air;   // kg/s
    double pt2;        // Pa
    double tt2;        // K
    double m2;         // isolator exit Mach
};

struct PortFlow {
    double g;      // kg/(m^2 s), port mass flux
    double p4;     // Pa
    double rho3;   // kg/m^3
    double u3;     // m/s
    double t2;     // K, static at combustor entrance
};

struct EquilibriumState {
    double t4_eq;
    double gamma4;
    double r4;
    double x_co;
};

/// Full-capture inlet surrogate: stream tube of radius r0, MIL-E-5008B
/// total-pressure recovery, adiabatic, fixed subsonic exit Mach.
InletState inlet_surrogate(double r0, const FlightCondition& fc,
                           const FuelModel& fm);

/// Port mass flux, entrance statics, and the friction total-pressure drop
/// dPt = (f_D/4) (L_f/d) (rho3 u3^2 / 2). Throws InfeasibleError if the
/// resulting aft pressure is non-positive.
PortFlow port_flow_and_pressure(const InletState& in, double r3,
                                const SfrjGeometry& geom, const FuelModel& fm);

/// rdot = alpha_eff * g^a * p4^b * tt2^c. All inputs must be positive.
double regression_rate(double g, double p4, double tt2, const FuelModel& fm);

/// mdot_f = 2 pi r3 L_f rho_f rdot (radial burn, uniform along the grain).
double fuel_flow(double r3, double lf, double rho_f, double rdot);

/// phi = (mdot_f / mdot_air) / f_stoich.
double equivalence_ratio(double mdot_f, double mdot_air, double f_stoich);

/// Smooth stand-in for the equilibrium flame solution.
EquilibriumState equilibrium_surrogate(double phi_g, double t2, double p4,
                                       const FuelModel& fm);

/// t4 = eta_c (t4_eq - t2) + t2.
double aft_temperature(double t4_eq, double t2, double eta_c);

/// ue = eta_n * sqrt(2 gamma4 r4 tt4 / (gamma4-1) * (1 - (p0/pt4)^((gamma4-1)/gamma4))).
/// Throws InfeasibleError when pt4 < p0.
double exhaust_velocity(double gamma4, double r4, double tt4, double p0,
                        double pt4, double eta_n);

/// T = mdot_air (1 + f) ue - mdot_air u0.
double thrust(double mdot_air, double f, double ue, double u0);

/// Steady outputs at one operating point (r0, r3); no state advance.
PlantOutputs evaluate_plant(double r0, double r3, const SfrjGeometry& geom,
                            const FuelModel& fm, const FlightCondition& fc);

/// Advances one quasi-static step: evaluates the station chain at the
/// current port radius, then grows r3 by rdot*dt. Sets burned_out once
/// r3 reaches r3_max. Throws InfeasibleError (via the chain) on pressure
/// collapse and std::logic_error if stepped past burnout.
PlantOutputs plant_step(PlantState& st, double r0, double dt,
                        const SfrjGeometry& geom, const FuelModel& fm,
                        const FlightCondition& fc);

struct ThrustRange {
    double t_min;
    double t_max;
};

/// Min/max steady thrust over a uniform r0 sweep at the initial port
/// radius. Throws InfeasibleError if every sample is infeasible.
ThrustRange feasible_thrust_range(const FlightCondition& fc,
                                  const SfrjGeometry& geom,
                                  const FuelModel& fm, int n_samples);

}  // namespace dmac
