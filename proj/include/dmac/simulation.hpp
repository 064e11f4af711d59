#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dmac/config.hpp"
#include "dmac/controller.hpp"
#include "dmac/normalization.hpp"
#include "dmac/plant.hpp"

namespace dmac {

/// One logged step of a closed-loop run. Field order here is the CSV
/// column order.
struct SimRecord {
    int k = 0;
    double r_n = 0.0;    // commanded thrust [N]
    double y_n = 0.0;    // generated thrust [N]
    double u = 0.0;      // control, dimensionless
    double v = 0.0;      // dither component
    double z = 0.0;      // normalized output error
    double q = 0.0;      // integrator state used in u
    double r0_mm = 0.0;  // applied cowl radius [mm]
    std::array<double, 12> theta{};  // Theta_k, row-major 3x4
    bool saturated = false;
    bool synthesis_failed = false;
    // plant diagnostics
    double pt4 = 0.0;
    double x_co = 0.0;
    double mdot_air = 0.0;
    double mdot_f = 0.0;
    double phi_g = 0.0;
    double t4 = 0.0;
    double ue = 0.0;
    double rdot = 0.0;
};

struct TrialResult {
    bool converged = false;
    double terminal_error = 0.0;  // mean |r - y| [N] over the final window
    std::string diverged_reason;  // empty unless the run aborted
    // sampled parameters, when the trial drew any
    double alpha = 0.0;
    double eta_c = 0.0;
    double altitude = 0.0;               // m
    std::vector<double> commands;        // N (envelope trials)
    std::vector<bool> command_converged; // per command (envelope trials)
};

/// Normalization bounds, rescaled regression prefactor, and the thrust
/// range the calibration sweep observed.
struct Calibration {
    NormalizationMap norm = NormalizationMap::identity();
    double alpha_scale = 1.0;
    ThrustRange feasible{0.0, 0.0};
};

/// Sweeps r0 over its full travel (64 points) at the initial port radius
/// and returns per-channel (min, max) widened by 10% of the observed
/// span (5% per side; degenerate spans get an absolute epsilon band).
/// alpha_scale in `fuel` is applied as given — pass the calibrated value.
NormalizationMap calibrate_normalization(const FlightCondition& fc,
                                         const SfrjGeometry& geom,
                                         const FuelModel& fuel,
                                         ThrustRange* observed_range = nullptr);

/// Bisects the regression prefactor multiplier in [0.5, 1.5] so that
/// steady thrust at the nominal cowl radius meets cfg.calibration_target.
double calibrate_alpha_scale(const ExperimentConfig& cfg);

/// Full calibration pass at the config's flight condition: alpha rescale
/// first, then the normalization sweep with the rescaled fuel model.
Calibration calibrate(const ExperimentConfig& cfg);

struct RunResult {
    std::vector<SimRecord> records;
    TrialResult trial;
};

/// Convergence classifier shared by every campaign: mean |r - y| over the
/// final window_frac of recorded steps, compared against tol_frac of the
/// final commanded thrust.
bool classify_converged(const std::vector<SimRecord>& records,
                        double window_frac, double tol_frac,
                        double final_command, double* terminal_error);

/// Runs plant and controller in lockstep for cfg.run.steps iterations (or
/// until burnout / infeasibility). The fuel model is taken from `cfg`
/// with calibration.alpha_scale applied; `fuel_override`, when given,
/// replaces the sampled parameters (Monte Carlo trials).
RunResult run_closed_loop(const ExperimentConfig& cfg,
                          const Calibration& calibration,
                          const FuelModel* fuel_override = nullptr,
                          const FlightCondition* fc_override = nullptr);

/// Steady-state open-loop characteristic: one record per r0 grid point.
struct SweepPoint {
    double r0_mm;
    PlantOutputs outputs;
};
std::vector<SweepPoint> open_loop_sweep(const ExperimentConfig& cfg,
                                        int n_samples = 64);

}  // namespace dmac
