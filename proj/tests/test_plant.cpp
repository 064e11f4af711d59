#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dmac/atmosphere.hpp"
#include "dmac/plant.hpp"

using namespace dmac;

namespace {

FlightCondition cruise() { return make_flight_condition(3.25, 30000.0); }

}  // namespace

TEST_CASE("standard atmosphere: sea level, tropopause, cruise altitude") {
    const AtmosphereState sl = standard_atmosphere(0.0);
    CHECK(sl.pressure == doctest::Approx(101325.0).epsilon(1e-12));
    CHECK(sl.temperature == doctest::Approx(288.15).epsilon(1e-12));

    const AtmosphereState tropo = standard_atmosphere(11000.0);
    CHECK(tropo.temperature == doctest::Approx(216.65).epsilon(1e-3));

    const AtmosphereState h30 = standard_atmosphere(30000.0);
    CHECK(h30.temperature == doctest::Approx(226.5).epsilon(1e-3));
    CHECK(h30.pressure == doctest::Approx(1197.0).epsilon(5e-3));

    CHECK_THROWS_AS(standard_atmosphere(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(standard_atmosphere(47001.0), std::invalid_argument);
}

TEST_CASE("flight condition reproduces the cruise totals") {
    const FlightCondition fc = cruise();
    // totals back out of the statics with gamma = 1.4
    const double ratio = 1.0 + 0.2 * fc.mach * fc.mach;
    CHECK(fc.tt0 == doctest::Approx(fc.t0 * ratio).epsilon(1e-3));
    CHECK(fc.pt0 == doctest::Approx(fc.p0 * std::pow(ratio, 3.5)).epsilon(1e-3));
    // cruise-point values
    CHECK(fc.pt0 == doctest::Approx(63677.0).epsilon(0.02));
    CHECK(fc.u0 == doctest::Approx(fc.mach * std::sqrt(1.4 * kGasConstantAir *
                                                       fc.t0)).epsilon(1e-12));
}

TEST_CASE("inlet surrogate: capture-area scaling and recovery limits") {
    const FlightCondition fc = cruise();
    const FuelModel fm;
    const InletState one = inlet_surrogate(0.02, fc, fm);
    const InletState two = inlet_surrogate(0.04, fc, fm);
    CHECK(two.mdot_air == doctest::Approx(4.0 * one.mdot_air).epsilon(1e-12));
    CHECK(one.tt2 == fc.tt0);
    CHECK(one.m2 == fm.m2);

    const FlightCondition sonic = make_flight_condition(1.0, 20000.0);
    const InletState at_m1 = inlet_surrogate(0.05, sonic, fm);
    CHECK(at_m1.pt2 == doctest::Approx(sonic.pt0).epsilon(1e-12));

    // frozen regression value at the nominal point, from the direct
    // formula mdot = rho0 u0 pi r0^2 with the cruise statics
    const double rho0 = fc.p0 / (kGasConstantAir * fc.t0);
    const double expect = rho0 * fc.u0 * 3.14159265358979323846 * 0.05358 * 0.05358;
    const InletState nom = inlet_surrogate(0.05358, fc, fm);
    CHECK(nom.mdot_air == doctest::Approx(expect).epsilon(1e-12));
    CHECK(nom.mdot_air == doctest::Approx(0.1628).epsilon(2e-3));
}

TEST_CASE("port flow: area scaling, frictionless limit, nominal drop") {
    const FlightCondition fc = cruise();
    const FuelModel fm;
    const SfrjGeometry geom;
    const InletState in = inlet_surrogate(geom.r0_nominal, fc, fm);

    const PortFlow pf = port_flow_and_pressure(in, geom.r3_init, geom, fm);
    const PortFlow pf_half =
        port_flow_and_pressure(in, geom.r3_init / 2.0, geom, fm);
    CHECK(pf_half.g == doctest::Approx(4.0 * pf.g).epsilon(1e-12));

    FuelModel frictionless = fm;
    frictionless.darcy_f = 0.0;
    const PortFlow ideal =
        port_flow_and_pressure(in, geom.r3_init, geom, frictionless);
    CHECK(ideal.p4 == doctest::Approx(in.pt2).epsilon(1e-15));

    // friction loss is a small fraction of the recovered total pressure
    CHECK((in.pt2 - pf.p4) / in.pt2 < 0.10);
    CHECK(pf.p4 < in.pt2);
}

TEST_CASE("regression rate: degenerate exponents and linearity") {
    FuelModel fm;
    fm.alpha = 3.3e-5;
    fm.a = fm.b = fm.c = 0.0;
    CHECK(regression_rate(10.0, 5e4, 700.0, fm) ==
          doctest::Approx(3.3e-5).epsilon(1e-15));

    fm.a = 1.0;
    CHECK(regression_rate(20.0, 5e4, 700.0, fm) ==
          doctest::Approx(2.0 * regression_rate(10.0, 5e4, 700.0, fm))
              .epsilon(1e-12));

    CHECK_THROWS_AS(regression_rate(-1.0, 5e4, 700.0, fm),
                    std::invalid_argument);
    CHECK_THROWS_AS(regression_rate(10.0, 0.0, 700.0, fm),
                    std::invalid_argument);

    // default law at the nominal operating point stays in the design band
    const FlightCondition fc = cruise();
    const FuelModel nominal;
    const SfrjGeometry geom;
    const PlantOutputs out =
        evaluate_plant(geom.r0_nominal, geom.r3_init, geom, nominal, fc);
    CHECK(out.rdot > 1e-5);
    CHECK(out.rdot < 1e-3);
}

TEST_CASE("fuel flow: direct arithmetic and linearity") {
    CHECK(fuel_flow(0.0592, 0.5, 900.0, 1e-4) ==
          doctest::Approx(0.016738).epsilon(1e-4));
    CHECK(fuel_flow(0.0592, 1.0, 900.0, 1e-4) ==
          doctest::Approx(2.0 * fuel_flow(0.0592, 0.5, 900.0, 1e-4))
              .epsilon(1e-12));
    CHECK(fuel_flow(0.0592, 0.5, 900.0, 0.0) == 0.0);
}

TEST_CASE("equivalence ratio: stoichiometric point and zero fuel") {
    const double fs = 0.07;
    CHECK(equivalence_ratio(0.07, 1.0, fs) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(equivalence_ratio(0.0, 1.0, fs) == 0.0);
    CHECK_THROWS_AS(equivalence_ratio(0.1, 0.0, fs), std::invalid_argument);

    // default stoichiometric ratio for C4H6 in air:
    // 54.092 / (5.5 * 31.998 / 0.232)
    const FuelModel fm;
    CHECK(fm.f_stoich == doctest::Approx(0.0713).epsilon(2e-3));
}

TEST_CASE("equilibrium surrogate: shape of the heat-release map") {
    const FuelModel fm;
    const double t2 = 690.0;
    const EquilibriumState lean0 = equilibrium_surrogate(0.0, t2, 5e4, fm);
    CHECK(lean0.t4_eq == doctest::Approx(t2).epsilon(1e-12));
    CHECK(lean0.x_co < 2e-3);

    const EquilibriumState stoich = equilibrium_surrogate(1.0, t2, 5e4, fm);
    CHECK(stoich.t4_eq == doctest::Approx(t2 + fm.dt_peak).epsilon(1e-12));

    const EquilibriumState lean = equilibrium_surrogate(0.5, t2, 5e4, fm);
    const EquilibriumState rich = equilibrium_surrogate(1.5, t2, 5e4, fm);
    CHECK(lean.t4_eq < stoich.t4_eq);
    CHECK(lean.x_co < rich.x_co);

    // outside the burnable band the heat release vanishes
    const EquilibriumState inert = equilibrium_surrogate(2.5, t2, 5e4, fm);
    CHECK(inert.t4_eq == doctest::Approx(t2).epsilon(1e-12));

    // gamma4 falls with temperature, within its interpolation bracket
    CHECK(stoich.gamma4 < lean0.gamma4);
    CHECK(stoich.gamma4 >= 1.25);
    CHECK(lean0.gamma4 <= 1.33);
}

TEST_CASE("aft temperature") {
    CHECK(aft_temperature(2000.0, 600.0, 0.75) ==
          doctest::Approx(1650.0).epsilon(1e-12));
    CHECK(aft_temperature(1800.0, 700.0, 1.0) ==
          doctest::Approx(1800.0).epsilon(1e-12));
    CHECK(aft_temperature(1800.0, 700.0, 0.0) ==
          doctest::Approx(700.0).epsilon(1e-12));
}

TEST_CASE("exhaust velocity: no pressure ratio, direct value, scaling") {
    CHECK(exhaust_velocity(1.4, 287.0, 1000.0, 5e4, 5e4, 1.0) == 0.0);

    // gamma = 1.4, R = 287, Tt = 1000 K, p0/pt4 = 0.1, eta = 1
    const double ue = exhaust_velocity(1.4, 287.0, 1000.0, 1e4, 1e5, 1.0);
    CHECK(ue == doctest::Approx(984.1).epsilon(2e-3));

    // sqrt(Tt) scaling at a fixed pressure ratio
    const double ue4 = exhaust_velocity(1.4, 287.0, 4000.0, 1e4, 1e5, 1.0);
    CHECK(ue4 == doctest::Approx(2.0 * ue).epsilon(1e-12));

    CHECK_THROWS_AS(exhaust_velocity(1.4, 287.0, 1000.0, 2e5, 1e5, 1.0),
                    InfeasibleError);
}

TEST_CASE("thrust: null case, direct value, sign crossing") {
    CHECK(thrust(1.0, 0.0, 900.0, 900.0) == 0.0);
    CHECK(thrust(1.0, 0.05, 1000.0, 900.0) ==
          doctest::Approx(150.0).epsilon(1e-12));
    // sign flips exactly where (1+f) ue crosses u0
    const double f = 0.04;
    const double u0 = 980.0;
    const double ue_critical = u0 / (1.0 + f);
    CHECK(thrust(0.2, f, ue_critical * 1.001, u0) > 0.0);
    CHECK(thrust(0.2, f, ue_critical * 0.999, u0) < 0.0);
    CHECK(thrust(0.2, f, ue_critical, u0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("plant step: port growth, burnout, determinism") {
    const FlightCondition fc = cruise();
    const SfrjGeometry geom;
    const FuelModel fm;

    PlantState st{geom.r3_init};
    double prev_r3 = st.r3;
    for (int k = 0; k < 1000; ++k) {
        const PlantOutputs out = plant_step(st, geom.r0_nominal, 0.01, geom, fm, fc);
        CHECK(out.thrust > 0.0);
        CHECK(std::isfinite(out.thrust));
        CHECK(st.r3 > prev_r3);
        prev_r3 = st.r3;
    }
    CHECK_FALSE(st.burned_out);
    CHECK(st.time == doctest::Approx(10.0).epsilon(1e-9));

    // long horizon reaches burnout and refuses further stepping
    PlantState burn{geom.r3_init};
    int steps = 0;
    while (!burn.burned_out && steps < 2000000) {
        plant_step(burn, geom.r0_nominal, 0.1, geom, fm, fc);
        ++steps;
    }
    CHECK(burn.burned_out);
    CHECK(burn.r3 == geom.r3_max);
    CHECK_THROWS_AS(plant_step(burn, geom.r0_nominal, 0.1, geom, fm, fc),
                    std::logic_error);

    // identical inputs, identical outputs
    PlantState s1{geom.r3_init};
    PlantState s2{geom.r3_init};
    const PlantOutputs o1 = plant_step(s1, 0.055, 0.01, geom, fm, fc);
    const PlantOutputs o2 = plant_step(s2, 0.055, 0.01, geom, fm, fc);
    CHECK(o1.thrust == o2.thrust);
    CHECK(o1.rdot == o2.rdot);
    CHECK(s1.r3 == s2.r3);
}

TEST_CASE("thrust vs cowl radius is smooth across the sweep grid") {
    const FlightCondition fc = cruise();
    const SfrjGeometry geom;
    const FuelModel fm;
    const int n = 64;
    std::vector<double> ts;
    for (int i = 0; i < n; ++i) {
        const double r0 = geom.r0_min + (geom.r0_max - geom.r0_min) * i / (n - 1.0);
        ts.push_back(evaluate_plant(r0, geom.r3_init, geom, fm, fc).thrust);
    }
    std::vector<double> slopes;
    for (int i = 0; i + 1 < n; ++i) slopes.push_back(std::abs(ts[i + 1] - ts[i]));
    std::vector<double> sorted = slopes;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (const double s : slopes) CHECK(s <= 10.0 * median);
}

TEST_CASE("feasible thrust range brackets the command band") {
    const FlightCondition fc = cruise();
    const SfrjGeometry geom;
    const FuelModel fm;

    const ThrustRange two = feasible_thrust_range(fc, geom, fm, 2);
    CHECK(two.t_min <= two.t_max);
    CHECK_THROWS_AS(feasible_thrust_range(fc, geom, fm, 1),
                    std::invalid_argument);

    const ThrustRange range = feasible_thrust_range(fc, geom, fm, 64);
    CHECK(range.t_min < 100.0);
    CHECK(range.t_max > 100.0);
    // frozen from the sweep at the defaults (alpha_scale = 1)
    CHECK(range.t_min == doctest::Approx(92.1).epsilon(0.02));
    CHECK(range.t_max == doctest::Approx(118.9).epsilon(0.02));
}
