#pragma once

#include <string>
#include <vector>

#include "dmac/campaigns.hpp"
#include "dmac/config.hpp"
#include "dmac/simulation.hpp"

namespace dmac {

/// All writers are deterministic: fixed headers, %.17g doubles, no
/// timestamps, so a rerun with the same config and seed is byte-identical.
/// I/O failures throw std::runtime_error carrying the path.

void write_records_csv(const std::string& path,
                       const std::vector<SimRecord>& records);

/// Long-format error curve (step, |r - y| in N) for log-scale plots.
void write_error_csv(const std::string& path,
                     const std::vector<SimRecord>& records);

void write_sweep_csv(const std::string& path, const SweepReport& report);

void write_mc_params_csv(const std::string& path, const McReport& report);

void write_mc_envelope_csv(const std::string& path, const McReport& report);

void write_envelope_traces_csv(const std::string& path, const McReport& report);

/// Run manifest: resolved config echo, its content hash, the seed, and
/// calibration values, as pretty-printed JSON.
void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const Calibration& calibration,
                    const std::string& extra_json = "");

std::string format_double(double v);

}  // namespace dmac
