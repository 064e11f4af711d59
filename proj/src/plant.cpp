#include "dmac/plant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dmac {

namespace {

constexpr double kPi = 3.14159265358979323846;

double isentropic_t_ratio(double mach) {
    return 1.0 + 0.5 * (kGammaAir - 1.0) * mach * mach;
}

}  // namespace

InletState inlet_surrogate(double r0, const FlightCondition& fc,
                           const FuelModel& fm) {
    const double rho0 = fc.p0 / (kGasConstantAir * fc.t0);
    InletState in;
    in.mdot_air = rho0 * fc.u0 * kPi * r0 * r0;
    // MIL-E-5008B ram recovery for M > 1.
    const double eta_r =
        fc.mach > 1.0 ? 1.0 - 0.075 * std::pow(fc.mach - 1.0, 1.35) : 1.0;
    in.pt2 = eta_r * fc.pt0;
    in.tt2 = fc.tt0;
    in.m2 = fm.m2;
    return in;
}

PortFlow port_flow_and_pressure(const InletState& in, double r3,
                                const SfrjGeometry& geom, const FuelModel& fm) {
    if (!(r3 > 0.0)) {
        throw std::invalid_argument("port_flow_and_pressure: r3 must be positive");
    }
    PortFlow pf;
    pf.g = in.mdot_air / (kPi * r3 * r3);
    const double ratio = isentropic_t_ratio(in.m2);
    pf.t2 = in.tt2 / ratio;
    const double p2 = in.pt2 / std::pow(ratio, kGammaAir / (kGammaAir - 1.0));
    pf.rho3 = p2 / (kGasConstantAir * pf.t2);
    pf.u3 = pf.g / pf.rho3;
    const double dpt = (fm.darcy_f / 4.0) * (geom.lf / (2.0 * r3)) *
                       (pf.rho3 * pf.u3 * pf.u3 / 2.0);
    pf.p4 = in.pt2 - dpt;
    if (!(pf.p4 > 0.0)) {
        throw InfeasibleError("combustor pressure collapsed (p4 <= 0)");
    }
    return pf;
}

double regression_rate(double g, double p4, double tt2, const FuelModel& fm) {
    if (!(g > 0.0) || !(p4 > 0.0) || !(tt2 > 0.0)) {
        throw std::invalid_argument("regression_rate: inputs must be positive");
    }
    return fm.alpha_scale * fm.alpha * std::pow(g, fm.a) * std::pow(p4, fm.b) *
           std::pow(tt2, fm.c);
}

double fuel_flow(double r3, double lf, double rho_f, double rdot) {
    return 2.0 * kPi * r3 * lf * rho_f * rdot;
}

double equivalence_ratio(double mdot_f, double mdot_air, double f_stoich) {
    if (!(mdot_air > 0.0) || !(f_stoich > 0.0)) {
        throw std::invalid_argument(
            "equivalence_ratio: mdot_air and f_stoich must be positive");
    }
    return (mdot_f / mdot_air) / f_stoich;
}

EquilibriumState equilibrium_surrogate(double phi_g, double t2, double p4,
                                       const FuelModel& fm) {
    (void)p4;  // pressure dependence dropped in the surrogate
    EquilibriumState eq;
    const double s = (phi_g > 0.0 && phi_g < 2.0) ? phi_g * (2.0 - phi_g) : 0.0;
    eq.t4_eq = t2 + fm.dt_peak * s;
    eq.x_co = fm.x_co_max / (1.0 + std::exp(-(phi_g - 1.0) / fm.co_width));
    const double t_cl = std::clamp(eq.t4_eq, 1000.0, 2800.0);
    eq.gamma4 = 1.33 + (1.25 - 1.33) * (t_cl - 1000.0) / 1800.0;
    eq.r4 = fm.r4;
    return eq;
}

double aft_temperature(double t4_eq, double t2, double eta_c) {
    return eta_c * (t4_eq - t2) + t2;
}

double exhaust_velocity(double gamma4, double r4, double tt4, double p0,
                        double pt4, double eta_n) {
    if (!(gamma4 > 1.0) || !(p0 > 0.0)) {
        throw std::invalid_argument("exhaust_velocity: invalid gas properties");
    }
    if (pt4 < p0) {
        throw InfeasibleError("nozzle cannot expand (pt4 < p0)");
    }
    const double expo = (gamma4 - 1.0) / gamma4;
    const double term = 1.0 - std::pow(p0 / pt4, expo);
    const double ue_th =
        std::sqrt(2.0 * gamma4 * r4 * tt4 / (gamma4 - 1.0) * term);
    return eta_n * ue_th;
}

double thrust(double mdot_air, double f, double ue, double u0) {
    return mdot_air * (1.0 + f) * ue - mdot_air * u0;
}

PlantOutputs evaluate_plant(double r0, double r3, const SfrjGeometry& geom,
                            const FuelModel& fm, const FlightCondition& fc) {
    const InletState in = inlet_surrogate(r0, fc, fm);
    const PortFlow pf = port_flow_and_pressure(in, r3, geom, fm);
    const double rdot = regression_rate(pf.g, pf.p4, in.tt2, fm);
    const double mdot_f = fuel_flow(r3, geom.lf, fm.rho_f, rdot);
    const double phi_g = equivalence_ratio(mdot_f, in.mdot_air, fm.f_stoich);
    const EquilibriumState eq = equilibrium_surrogate(phi_g, pf.t2, pf.p4, fm);
    const double t4 = aft_temperature(eq.t4_eq, pf.t2, fm.eta_c);
    // Aft-end Mach is low, so static and total coincide; likewise pt4 = p4.
    const double ue =
        exhaust_velocity(eq.gamma4, eq.r4, t4, fc.p0, pf.p4, fm.eta_n);
    const double f = mdot_f / in.mdot_air;

    PlantOutputs out;
    out.thrust = thrust(in.mdot_air, f, ue, fc.u0);
    out.pt4 = pf.p4;
    out.x_co = eq.x_co;
    out.mdot_air = in.mdot_air;
    out.mdot_f = mdot_f;
    out.phi_g = phi_g;
    out.t4 = t4;
    out.ue = ue;
    out.rdot = rdot;
    return out;
}

PlantOutputs plant_step(PlantState& st, double r0, double dt,
                        const SfrjGeometry& geom, const FuelModel& fm,
                        const FlightCondition& fc) {
    if (st.burned_out) {
        throw std::logic_error("plant_step: grain is burned out");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("plant_step: dt must be positive");
    }
    const PlantOutputs out = evaluate_plant(r0, st.r3, geom, fm, fc);
    // The port opens as fuel is consumed.
    st.r3 += out.rdot * dt;
    st.time += dt;
    if (st.r3 >= geom.r3_max) {
        st.r3 = geom.r3_max;
        st.burned_out = true;
    }
    return out;
}

ThrustRange feasible_thrust_range(const FlightCondition& fc,
                                  const SfrjGeometry& geom,
                                  const FuelModel& fm, int n_samples) {
    if (n_samples < 2) {
        throw std::invalid_argument("feasible_thrust_range: n_samples must be >= 2");
    }
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -std::numeric_limits<double>::infinity();
    int feasible = 0;
    for (int i = 0; i < n_samples; ++i) {
        const double r0 = geom.r0_min + (geom.r0_max - geom.r0_min) * i /
                                            (n_samples - 1.0);
        try {
            const PlantOutputs out =
                evaluate_plant(r0, geom.r3_init, geom, fm, fc);
            t_min = std::min(t_min, out.thrust);
            t_max = std::max(t_max, out.thrust);
            ++feasible;
        } catch (const InfeasibleError&) {
            // skip infeasible samples; only an all-infeasible sweep is fatal
        }
    }
    if (feasible == 0) {
        throw InfeasibleError("feasible_thrust_range: no feasible sample");
    }
    return {t_min, t_max};
}

}  // namespace dmac
