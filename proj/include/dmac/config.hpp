#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmac/controller.hpp"
#include "dmac/plant.hpp"

namespace dmac {

/// Piecewise-constant thrust command: (start_step, thrust [N]) segments,
/// start steps strictly increasing, first one at step 0.
class ReferenceSpec {
public:
    struct Segment {
        int start_step;
        double thrust;
    };

    ReferenceSpec() : segments_{{0, 100.0}} {}
    explicit ReferenceSpec(std::vector<Segment> segments);
    ReferenceSpec(std::initializer_list<Segment> segments)
        : ReferenceSpec(std::vector<Segment>(segments)) {}

    double value_at(int k) const;
    const std::vector<Segment>& segments() const { return segments_; }
    /// Thrust level of the last segment (what the run must settle on).
    double final_value() const { return segments_.back().thrust; }

private:
    std::vector<Segment> segments_;
};

struct RunSection {
    int steps = 1000;
    double dt = 0.01;  // s
    ReferenceSpec reference;
    std::string out_dir = "out";
    double convergence_window_frac = 0.1;  // tail fraction scored
    double convergence_tol_frac = 0.02;    // of the final commanded thrust
    bool control_enabled = true;           // false: hold the nominal cowl
};

struct McSection {
    int trials = 200;
    double alpha_mean = 4.44e-7;
    double alpha_sigma = 4.44e-8;
    double eta_c_mean = 0.75;
    double eta_c_sigma = 0.05;
    double altitude_min = 23000.0;  // m
    double altitude_max = 36000.0;  // m
    int commands_per_trial = 5;
    double margin_frac = 0.05;      // clipped off each end of the range
    int parallel = 0;               // worker threads; 0 = hardware default
};

enum class Mode {
    kSingleStep,
    kDoubleStep,
    kSensitivity,
    kMcParams,
    kMcEnvelope,
    kOpenLoopSweep,
    kCalibrate,
};

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct ExperimentConfig {
    Mode mode = Mode::kSingleStep;
    SfrjGeometry geometry;
    FuelModel fuel;
    double mach = 3.25;
    double altitude = 30000.0;  // m
    double calibration_target = 105.0;  // N, midpoint of the command band
    ControllerConfig controller;
    RunSection run;
    McSection mc;
};

/// Built-in nominal configuration (cruise at Mach 3.25, 30 km).
ExperimentConfig default_config();

/// Parses a JSON config file; unspecified keys keep their defaults.
/// Throws std::runtime_error with file/key context on bad input.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

/// Canonical JSON echo of a resolved config (sorted keys, fixed layout);
/// this is what gets hashed into the run manifest.
std::string config_to_json(const ExperimentConfig& cfg);

/// FNV-1a 64-bit content hash, hex-encoded.
std::string content_hash(const std::string& bytes);

}  // namespace dmac
