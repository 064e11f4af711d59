#include "dmac/emit.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace dmac {

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("emit: cannot open " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("emit: write failed for " + path);
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_records_csv(const std::string& path,
                       const std::vector<SimRecord>& records) {
    auto out = open_or_throw(path);
    out << "k,r_n,y_n,u,v,z,q,r0_mm";
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) out << ",theta_" << r << c;
    out << ",saturated,synthesis_failed,pt4,x_co,mdot_air,mdot_f,phi_g,t4,ue,rdot\n";
    for (const auto& rec : records) {
        out << rec.k << ',' << format_double(rec.r_n) << ','
            << format_double(rec.y_n) << ',' << format_double(rec.u) << ','
            << format_double(rec.v) << ',' << format_double(rec.z) << ','
            << format_double(rec.q) << ',' << format_double(rec.r0_mm);
        for (const double t : rec.theta) out << ',' << format_double(t);
        out << ',' << (rec.saturated ? 1 : 0) << ','
            << (rec.synthesis_failed ? 1 : 0) << ',' << format_double(rec.pt4)
            << ',' << format_double(rec.x_co) << ','
            << format_double(rec.mdot_air) << ',' << format_double(rec.mdot_f)
            << ',' << format_double(rec.phi_g) << ',' << format_double(rec.t4)
            << ',' << format_double(rec.ue) << ',' << format_double(rec.rdot)
            << '\n';
    }
    finish(out, path);
}

void write_error_csv(const std::string& path,
                     const std::vector<SimRecord>& records) {
    auto out = open_or_throw(path);
    out << "step,abs_error_n\n";
    for (const auto& rec : records) {
        out << rec.k << ',' << format_double(std::abs(rec.r_n - rec.y_n))
            << '\n';
    }
    finish(out, path);
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
    auto out = open_or_throw(path);
    out << "parameter,value,converged,terminal_error_n,diverged_reason\n";
    for (const auto& row : report.rows) {
        out << row.parameter << ',' << format_double(row.value) << ','
            << (row.trial.converged ? 1 : 0) << ','
            << format_double(row.trial.terminal_error) << ','
            << row.trial.diverged_reason << '\n';
    }
    finish(out, path);
}

void write_mc_params_csv(const std::string& path, const McReport& report) {
    auto out = open_or_throw(path);
    out << "trial,alpha,eta_c,converged,terminal_error_n,diverged_reason\n";
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        const auto& t = report.trials[i];
        out << i << ',' << format_double(t.alpha) << ','
            << format_double(t.eta_c) << ',' << (t.converged ? 1 : 0) << ','
            << format_double(t.terminal_error) << ',' << t.diverged_reason
            << '\n';
    }
    finish(out, path);
}

void write_mc_envelope_csv(const std::string& path, const McReport& report) {
    auto out = open_or_throw(path);
    out << "trial,altitude_km,command_idx,command_n,command_converged,"
           "trial_converged,diverged_reason\n";
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        const auto& t = report.trials[i];
        if (t.commands.empty()) {
            out << i << ',' << format_double(t.altitude * 1e-3)
                << ",,,," << (t.converged ? 1 : 0) << ','
                << t.diverged_reason << '\n';
            continue;
        }
        for (std::size_t j = 0; j < t.commands.size(); ++j) {
            out << i << ',' << format_double(t.altitude * 1e-3) << ',' << j
                << ',' << format_double(t.commands[j]) << ','
                << (t.command_converged[j] ? 1 : 0) << ','
                << (t.converged ? 1 : 0) << ','
                << (j == 0 ? t.diverged_reason : "") << '\n';
        }
    }
    finish(out, path);
}

void write_envelope_traces_csv(const std::string& path,
                               const McReport& report) {
    auto out = open_or_throw(path);
    out << "trial,command_idx,step,y_over_r\n";
    for (const auto& pt : report.traces) {
        out << pt.trial << ',' << pt.command << ',' << pt.step << ','
            << format_double(pt.y_over_r) << '\n';
    }
    finish(out, path);
}

void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const Calibration& calibration,
                    const std::string& extra_json) {
    const std::string cfg_json = config_to_json(cfg);
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(cfg_json);
    j["config_hash"] = content_hash(cfg_json);
    j["seed"] = cfg.controller.seed;
    j["calibration"] = {
        {"alpha_scale", calibration.alpha_scale},
        {"alpha_effective", calibration.alpha_scale * cfg.fuel.alpha},
        {"feasible_thrust_n",
         {calibration.feasible.t_min, calibration.feasible.t_max}},
        {"channels",
         {{"pt4", {calibration.norm.pt4.lo, calibration.norm.pt4.hi}},
          {"x_co", {calibration.norm.x_co.lo, calibration.norm.x_co.hi}},
          {"thrust",
           {calibration.norm.thrust.lo, calibration.norm.thrust.hi}}}},
    };
    if (!extra_json.empty()) {
        j["results"] = nlohmann::json::parse(extra_json);
    }
    auto out = open_or_throw(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

}  // namespace dmac
