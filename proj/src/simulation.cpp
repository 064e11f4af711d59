#include "dmac/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmac {

namespace {

constexpr int kSweepSamples = 64;

Channel widened(double lo, double hi) {
    const double span = hi - lo;
    if (span > 0.0) {
        return Channel(lo - 0.05 * span, hi + 0.05 * span);
    }
    const double eps = std::max(1e-6, std::abs(lo) * 1e-3);
    return Channel(lo - eps, hi + eps);
}

}  // namespace

NormalizationMap calibrate_normalization(const FlightCondition& fc,
                                         const SfrjGeometry& geom,
                                         const FuelModel& fuel,
                                         ThrustRange* observed_range) {
    double lo_pt4 = 0.0, hi_pt4 = 0.0;
    double lo_co = 0.0, hi_co = 0.0;
    double lo_th = 0.0, hi_th = 0.0;
    int feasible = 0;
    for (int i = 0; i < kSweepSamples; ++i) {
        const double r0 = geom.r0_min + (geom.r0_max - geom.r0_min) * i /
                                            (kSweepSamples - 1.0);
        PlantOutputs out;
        try {
            out = evaluate_plant(r0, geom.r3_init, geom, fuel, fc);
        } catch (const InfeasibleError&) {
            continue;
        }
        if (feasible == 0) {
            lo_pt4 = hi_pt4 = out.pt4;
            lo_co = hi_co = out.x_co;
            lo_th = hi_th = out.thrust;
        } else {
            lo_pt4 = std::min(lo_pt4, out.pt4);
            hi_pt4 = std::max(hi_pt4, out.pt4);
            lo_co = std::min(lo_co, out.x_co);
            hi_co = std::max(hi_co, out.x_co);
            lo_th = std::min(lo_th, out.thrust);
            hi_th = std::max(hi_th, out.thrust);
        }
        ++feasible;
    }
    if (feasible == 0) {
        throw InfeasibleError("calibration sweep: no feasible operating point");
    }
    if (observed_range) *observed_range = {lo_th, hi_th};
    return NormalizationMap{widened(lo_pt4, hi_pt4), widened(lo_co, hi_co),
                            widened(lo_th, hi_th)};
}

double calibrate_alpha_scale(const ExperimentConfig& cfg) {
    const FlightCondition fc = make_flight_condition(cfg.mach, cfg.altitude);
    auto thrust_at = [&](double scale) {
        FuelModel fm = cfg.fuel;
        fm.alpha_scale = scale;
        return evaluate_plant(cfg.geometry.r0_nominal, cfg.geometry.r3_init,
                              cfg.geometry, fm, fc)
            .thrust;
    };
    // Thrust is monotone in the prefactor on the lean branch, so a plain
    // bisection suffices; the window caps the rescale at +/-50%.
    double lo = 0.5, hi = 1.5;
    const double target = cfg.calibration_target;
    if (thrust_at(lo) >= target) return lo;
    if (thrust_at(hi) <= target) return hi;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (thrust_at(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Calibration calibrate(const ExperimentConfig& cfg) {
    Calibration cal;
    cal.alpha_scale = calibrate_alpha_scale(cfg);
    FuelModel fm = cfg.fuel;
    fm.alpha_scale = cal.alpha_scale;
    const FlightCondition fc = make_flight_condition(cfg.mach, cfg.altitude);
    cal.norm = calibrate_normalization(fc, cfg.geometry, fm, &cal.feasible);
    return cal;
}

bool classify_converged(const std::vector<SimRecord>& records,
                        double window_frac, double tol_frac,
                        double final_command, double* terminal_error) {
    if (records.empty()) {
        if (terminal_error) *terminal_error = std::numeric_limits<double>::quiet_NaN();
        return false;
    }
    const auto window = std::max<std::size_t>(
        1, static_cast<std::size_t>(records.size() * window_frac));
    double sum = 0.0;
    for (std::size_t i = records.size() - window; i < records.size(); ++i) {
        sum += std::abs(records[i].r_n - records[i].y_n);
    }
    const double mean_err = sum / window;
    if (terminal_error) *terminal_error = mean_err;
    return mean_err < tol_frac * std::abs(final_command);
}

RunResult run_closed_loop(const ExperimentConfig& cfg,
                          const Calibration& calibration,
                          const FuelModel* fuel_override,
                          const FlightCondition* fc_override) {
    FuelModel fm = fuel_override ? *fuel_override : cfg.fuel;
    fm.alpha_scale = calibration.alpha_scale;
    const FlightCondition fc =
        fc_override ? *fc_override
                    : make_flight_condition(cfg.mach, cfg.altitude);

    DmacController ctrl(cfg.controller, calibration.norm);
    PlantState state{cfg.geometry.r3_init};
    CowlCommand cowl{cfg.geometry.r0_nominal, false};

    RunResult result;
    result.records.reserve(cfg.run.steps);
    result.trial.alpha = fm.alpha;
    result.trial.eta_c = fm.eta_c;
    result.trial.altitude = fc.altitude;

    for (int k = 0; k < cfg.run.steps && !state.burned_out; ++k) {
        SimRecord rec;
        rec.k = k;
        rec.r_n = cfg.run.reference.value_at(k);
        try {
            const PlantOutputs out =
                plant_step(state, cowl.r0, cfg.run.dt, cfg.geometry, fm, fc);
            rec.y_n = out.thrust;
            rec.pt4 = out.pt4;
            rec.x_co = out.x_co;
            rec.mdot_air = out.mdot_air;
            rec.mdot_f = out.mdot_f;
            rec.phi_g = out.phi_g;
            rec.t4 = out.t4;
            rec.ue = out.ue;
            rec.rdot = out.rdot;
            rec.r0_mm = cowl.r0 * 1e3;

            if (cfg.run.control_enabled) {
                const ControlDecision dec =
                    ctrl.step(rec.r_n, out.pt4, out.x_co, out.thrust);
                rec.u = dec.u;
                rec.v = dec.v;
                rec.z = dec.z;
                rec.q = dec.q;
                rec.synthesis_failed = dec.synthesis_failed;
                const auto& th = ctrl.estimator().theta();
                for (int r = 0; r < 3; ++r) {
                    for (int c = 0; c < 4; ++c) rec.theta[r * 4 + c] = th(r, c);
                }
                cowl = control_to_cowl(dec.u, cfg.geometry.r0_nominal,
                                       cfg.geometry.r0_min, cfg.geometry.r0_max);
                rec.saturated = cowl.saturated;
            }
        } catch (const std::exception& e) {
            result.trial.converged = false;
            result.trial.diverged_reason = e.what();
            result.trial.terminal_error =
                std::numeric_limits<double>::quiet_NaN();
            return result;
        }
        result.records.push_back(rec);
    }

    result.trial.converged = classify_converged(
        result.records, cfg.run.convergence_window_frac,
        cfg.run.convergence_tol_frac, cfg.run.reference.final_value(),
        &result.trial.terminal_error);
    return result;
}

std::vector<SweepPoint> open_loop_sweep(const ExperimentConfig& cfg,
                                        int n_samples) {
    const FlightCondition fc = make_flight_condition(cfg.mach, cfg.altitude);
    std::vector<SweepPoint> points;
    points.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double r0 =
            cfg.geometry.r0_min +
            (cfg.geometry.r0_max - cfg.geometry.r0_min) * i / (n_samples - 1.0);
        SweepPoint pt;
        pt.r0_mm = r0 * 1e3;
        pt.outputs =
            evaluate_plant(r0, cfg.geometry.r3_init, cfg.geometry, cfg.fuel, fc);
        points.push_back(pt);
    }
    return points;
}

}  // namespace dmac
