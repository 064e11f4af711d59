#include "dmac/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dmac {

using nlohmann::json;

ReferenceSpec::ReferenceSpec(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty() || segments_.front().start_step != 0) {
        throw std::invalid_argument("ReferenceSpec: first segment must start at 0");
    }
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        if (segments_[i].start_step <= segments_[i - 1].start_step) {
            throw std::invalid_argument(
                "ReferenceSpec: start steps must be strictly increasing");
        }
    }
    for (const auto& seg : segments_) {
        if (!std::isfinite(seg.thrust)) {
            throw std::invalid_argument("ReferenceSpec: thrust must be finite");
        }
    }
}

double ReferenceSpec::value_at(int k) const {
    double value = segments_.front().thrust;
    for (const auto& seg : segments_) {
        if (k >= seg.start_step) value = seg.thrust;
    }
    return value;
}

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::kSingleStep: return "single-step";
        case Mode::kDoubleStep: return "double-step";
        case Mode::kSensitivity: return "sensitivity";
        case Mode::kMcParams: return "mc-params";
        case Mode::kMcEnvelope: return "mc-envelope";
        case Mode::kOpenLoopSweep: return "open-loop-sweep";
        case Mode::kCalibrate: return "calibrate";
    }
    return "single-step";
}

Mode mode_from_string(const std::string& s) {
    if (s == "single-step") return Mode::kSingleStep;
    if (s == "double-step") return Mode::kDoubleStep;
    if (s == "sensitivity") return Mode::kSensitivity;
    if (s == "mc-params") return Mode::kMcParams;
    if (s == "mc-envelope") return Mode::kMcEnvelope;
    if (s == "open-loop-sweep") return Mode::kOpenLoopSweep;
    if (s == "calibrate") return Mode::kCalibrate;
    throw std::runtime_error("unknown mode: " + s);
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_geometry(const json& j, SfrjGeometry& g) {
    maybe(j, "r0_min_m", g.r0_min);
    maybe(j, "r0_max_m", g.r0_max);
    maybe(j, "r0_nominal_m", g.r0_nominal);
    maybe(j, "r2_m", g.r2);
    maybe(j, "r3_init_m", g.r3_init);
    maybe(j, "r3_max_m", g.r3_max);
    maybe(j, "rt_m", g.rt);
    maybe(j, "lf_m", g.lf);
    if (!(g.r3_init < g.r3_max) || g.r3_init <= 0.0 || g.lf <= 0.0 ||
        g.r0_min <= 0.0 || !(g.r0_min < g.r0_max)) {
        throw std::runtime_error("config: invalid geometry");
    }
}

void parse_fuel(const json& j, FuelModel& f) {
    maybe(j, "rho_f", f.rho_f);
    maybe(j, "alpha", f.alpha);
    maybe(j, "alpha_scale", f.alpha_scale);
    maybe(j, "a", f.a);
    maybe(j, "b", f.b);
    maybe(j, "c", f.c);
    maybe(j, "f_stoich", f.f_stoich);
    maybe(j, "eta_c", f.eta_c);
    maybe(j, "eta_n", f.eta_n);
    maybe(j, "dt_peak", f.dt_peak);
    maybe(j, "x_co_max", f.x_co_max);
    maybe(j, "co_width", f.co_width);
    maybe(j, "r4", f.r4);
    maybe(j, "darcy_f", f.darcy_f);
    maybe(j, "m2", f.m2);
    if (!(f.eta_c > 0.0 && f.eta_c <= 1.0) || !(f.eta_n > 0.0 && f.eta_n <= 1.0)) {
        throw std::runtime_error("config: eta_c and eta_n must lie in (0, 1]");
    }
}

void parse_controller(const json& j, ControllerConfig& c) {
    maybe(j, "r_theta_scale", c.r_theta_scale);
    maybe(j, "lambda", c.lambda);
    maybe(j, "r1_scale", c.r1_scale);
    maybe(j, "r2", c.r2);
    maybe(j, "sigma_v", c.sigma_v);
    maybe(j, "seed", c.seed);
    maybe(j, "dare_tol", c.dare_tol);
    maybe(j, "dare_max_iter", c.dare_max_iter);
    maybe(j, "q_clamp", c.q_clamp);
}

void parse_run(const json& j, RunSection& r) {
    maybe(j, "steps", r.steps);
    maybe(j, "dt", r.dt);
    maybe(j, "out_dir", r.out_dir);
    maybe(j, "convergence_window_frac", r.convergence_window_frac);
    maybe(j, "convergence_tol_frac", r.convergence_tol_frac);
    maybe(j, "control_enabled", r.control_enabled);
    if (j.contains("reference")) {
        std::vector<ReferenceSpec::Segment> segs;
        for (const auto& item : j.at("reference")) {
            segs.push_back({item.at(0).get<int>(), item.at(1).get<double>()});
        }
        r.reference = ReferenceSpec(std::move(segs));
    }
    if (r.steps < 1) throw std::runtime_error("config: run.steps must be >= 1");
    if (!(r.dt > 0.0)) throw std::runtime_error("config: run.dt must be positive");
}

void parse_mc(const json& j, McSection& m) {
    maybe(j, "trials", m.trials);
    maybe(j, "alpha_mean", m.alpha_mean);
    maybe(j, "alpha_sigma", m.alpha_sigma);
    maybe(j, "eta_c_mean", m.eta_c_mean);
    maybe(j, "eta_c_sigma", m.eta_c_sigma);
    maybe(j, "altitude_min_m", m.altitude_min);
    maybe(j, "altitude_max_m", m.altitude_max);
    maybe(j, "commands_per_trial", m.commands_per_trial);
    maybe(j, "margin_frac", m.margin_frac);
    maybe(j, "parallel", m.parallel);
    if (m.trials < 1) throw std::runtime_error("config: mc.trials must be >= 1");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config: JSON parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    if (j.contains("mode")) cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("plant")) {
        const json& p = j.at("plant");
        if (p.contains("geometry")) parse_geometry(p.at("geometry"), cfg.geometry);
        if (p.contains("fuel")) parse_fuel(p.at("fuel"), cfg.fuel);
        if (p.contains("flight")) {
            maybe(p.at("flight"), "mach", cfg.mach);
            maybe(p.at("flight"), "altitude_m", cfg.altitude);
        }
    }
    maybe(j, "calibration_target_n", cfg.calibration_target);
    if (j.contains("controller")) parse_controller(j.at("controller"), cfg.controller);
    if (j.contains("run")) parse_run(j.at("run"), cfg.run);
    if (j.contains("mc")) parse_mc(j.at("mc"), cfg.mc);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["mode"] = to_string(cfg.mode);
    j["plant"]["geometry"] = {
        {"r0_min_m", cfg.geometry.r0_min},
        {"r0_max_m", cfg.geometry.r0_max},
        {"r0_nominal_m", cfg.geometry.r0_nominal},
        {"r2_m", cfg.geometry.r2},
        {"r3_init_m", cfg.geometry.r3_init},
        {"r3_max_m", cfg.geometry.r3_max},
        {"rt_m", cfg.geometry.rt},
        {"lf_m", cfg.geometry.lf},
    };
    j["plant"]["fuel"] = {
        {"rho_f", cfg.fuel.rho_f},       {"alpha", cfg.fuel.alpha},
        {"alpha_scale", cfg.fuel.alpha_scale}, {"a", cfg.fuel.a},
        {"b", cfg.fuel.b},               {"c", cfg.fuel.c},
        {"f_stoich", cfg.fuel.f_stoich}, {"eta_c", cfg.fuel.eta_c},
        {"eta_n", cfg.fuel.eta_n},       {"dt_peak", cfg.fuel.dt_peak},
        {"x_co_max", cfg.fuel.x_co_max}, {"co_width", cfg.fuel.co_width},
        {"r4", cfg.fuel.r4},             {"darcy_f", cfg.fuel.darcy_f},
        {"m2", cfg.fuel.m2},
    };
    j["plant"]["flight"] = {{"mach", cfg.mach}, {"altitude_m", cfg.altitude}};
    j["calibration_target_n"] = cfg.calibration_target;
    j["controller"] = {
        {"r_theta_scale", cfg.controller.r_theta_scale},
        {"lambda", cfg.controller.lambda},
        {"r1_scale", cfg.controller.r1_scale},
        {"r2", cfg.controller.r2},
        {"sigma_v", cfg.controller.sigma_v},
        {"seed", cfg.controller.seed},
        {"dare_tol", cfg.controller.dare_tol},
        {"dare_max_iter", cfg.controller.dare_max_iter},
        {"q_clamp", cfg.controller.q_clamp},
    };
    json ref = json::array();
    for (const auto& seg : cfg.run.reference.segments()) {
        ref.push_back({seg.start_step, seg.thrust});
    }
    j["run"] = {
        {"steps", cfg.run.steps},
        {"dt", cfg.run.dt},
        {"reference", ref},
        {"out_dir", cfg.run.out_dir},
        {"convergence_window_frac", cfg.run.convergence_window_frac},
        {"convergence_tol_frac", cfg.run.convergence_tol_frac},
        {"control_enabled", cfg.run.control_enabled},
    };
    j["mc"] = {
        {"trials", cfg.mc.trials},
        {"alpha_mean", cfg.mc.alpha_mean},
        {"alpha_sigma", cfg.mc.alpha_sigma},
        {"eta_c_mean", cfg.mc.eta_c_mean},
        {"eta_c_sigma", cfg.mc.eta_c_sigma},
        {"altitude_min_m", cfg.mc.altitude_min},
        {"altitude_max_m", cfg.mc.altitude_max},
        {"commands_per_trial", cfg.mc.commands_per_trial},
        {"margin_frac", cfg.mc.margin_frac},
        {"parallel", cfg.mc.parallel},
    };
    return j.dump(2);
}

std::string content_hash(const std::string& bytes) {
    // FNV-1a, 64-bit
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace dmac
