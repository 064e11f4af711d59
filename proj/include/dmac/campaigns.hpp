#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmac/config.hpp"
#include "dmac/simulation.hpp"

namespace dmac {

struct SweepRow {
    std::string parameter;  // which hyperparameter this run varies
    double value;
    TrialResult trial;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    int converged = 0;
};

/// Varies each controller hyperparameter (R_Theta scale, lambda, R_1
/// scale, R_2) over its grid while holding the others at their configured
/// values, re-running the single-step task each time. Individual failures
/// are recorded, not fatal.
SweepReport sensitivity_sweep(const ExperimentConfig& cfg,
                              const Calibration& calibration);

struct McReport {
    std::vector<TrialResult> trials;
    double success_rate = 0.0;
    // envelope only: y/command histories of converged command runs,
    // flattened as (trial, command index, step, y/command)
    struct TracePoint {
        int trial;
        int command;
        int step;
        double y_over_r;
    };
    std::vector<TracePoint> traces;
};

/// Gaussian (alpha, eta_c) robustness campaign: every trial rebuilds the
/// plant from a fresh draw (alpha truncated positive, eta_c to (0, 1])
/// and reruns the configured step task with the same controller
/// configuration. Trial t derives its stream from derive_seed(seed, t),
/// so verdicts are independent of scheduling.
McReport monte_carlo_params(const ExperimentConfig& cfg,
                            const Calibration& calibration, int n_trials,
                            std::uint64_t seed);

/// Altitude/thrust-command envelope campaign: H ~ U(altitude_min, max),
/// five commands drawn from the margin-clipped feasible range at that
/// altitude, one fresh controller per command; a trial converges when all
/// of its commands do. Plant parameters stay nominal.
McReport monte_carlo_envelope(const ExperimentConfig& cfg,
                              const Calibration& calibration, int n_trials,
                              std::uint64_t seed);

/// Spearman rank correlation (midranks for ties). Used to check that
/// envelope divergences skew toward low commanded thrust.
double rank_correlation(const std::vector<double>& x,
                        const std::vector<double>& y);

}  // namespace dmac
