// Command-line front end: closed-loop runs, hyperparameter sweeps, Monte
// Carlo campaigns, calibration, and open-loop plant characterization.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmac/campaigns.hpp"
#include "dmac/config.hpp"
#include "dmac/emit.hpp"
#include "dmac/simulation.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;
    int parallel = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "seed override")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--trials", opts.trials, "Monte Carlo trial count");
    cmd->add_option("--parallel", opts.parallel, "worker threads (0 = auto)");
}

dmac::ExperimentConfig resolve(const CommonOpts& opts) {
    dmac::ExperimentConfig cfg = opts.config_path.empty()
                                     ? dmac::default_config()
                                     : dmac::load_config(opts.config_path);
    if (opts.seed_set) cfg.controller.seed = opts.seed;
    if (!opts.out_dir.empty()) cfg.run.out_dir = opts.out_dir;
    if (opts.trials > 0) cfg.mc.trials = opts.trials;
    if (opts.parallel >= 0) cfg.mc.parallel = opts.parallel;
    std::filesystem::create_directories(cfg.run.out_dir);
    return cfg;
}

std::string out_path(const dmac::ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.run.out_dir) / name).string();
}

int cmd_run(const CommonOpts& opts, bool double_step) {
    dmac::ExperimentConfig cfg = resolve(opts);
    cfg.mode = double_step ? dmac::Mode::kDoubleStep : dmac::Mode::kSingleStep;
    if (double_step && cfg.run.reference.segments().size() < 2) {
        cfg.run.reference = dmac::ReferenceSpec({{0, 100.0}, {200, 110.0}});
    }
    const dmac::Calibration cal = dmac::calibrate(cfg);
    const dmac::RunResult result = dmac::run_closed_loop(cfg, cal);

    dmac::write_records_csv(out_path(cfg, "run.csv"), result.records);
    dmac::write_error_csv(out_path(cfg, "run_error.csv"), result.records);
    nlohmann::json res = {
        {"converged", result.trial.converged},
        {"terminal_error_n", result.trial.terminal_error},
        {"steps_recorded", result.records.size()},
        {"diverged_reason", result.trial.diverged_reason},
    };
    dmac::write_manifest(out_path(cfg, "manifest.json"), cfg, cal, res.dump());

    std::cout << "steps: " << result.records.size()
              << "  converged: " << (result.trial.converged ? "yes" : "no")
              << "  terminal mean|z|: " << result.trial.terminal_error << " N\n";
    if (!result.trial.diverged_reason.empty()) {
        std::cout << "diverged: " << result.trial.diverged_reason << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    dmac::ExperimentConfig cfg = resolve(opts);
    cfg.mode = dmac::Mode::kSensitivity;
    const dmac::Calibration cal = dmac::calibrate(cfg);
    const dmac::SweepReport report = dmac::sensitivity_sweep(cfg, cal);

    dmac::write_sweep_csv(out_path(cfg, "sweep_results.csv"), report);
    nlohmann::json res = {
        {"runs", report.rows.size()},
        {"converged", report.converged},
    };
    dmac::write_manifest(out_path(cfg, "manifest.json"), cfg, cal, res.dump());
    std::cout << "sweep: " << report.converged << "/" << report.rows.size()
              << " runs converged\n";
    return 0;
}

int cmd_mc(const CommonOpts& opts, bool envelope) {
    dmac::ExperimentConfig cfg = resolve(opts);
    cfg.mode = envelope ? dmac::Mode::kMcEnvelope : dmac::Mode::kMcParams;
    const dmac::Calibration cal = dmac::calibrate(cfg);
    const std::uint64_t seed = cfg.controller.seed;

    const dmac::McReport report =
        envelope
            ? dmac::monte_carlo_envelope(cfg, cal, cfg.mc.trials, seed)
            : dmac::monte_carlo_params(cfg, cal, cfg.mc.trials, seed);

    if (envelope) {
        dmac::write_mc_envelope_csv(out_path(cfg, "mc_envelope_results.csv"),
                                    report);
        dmac::write_envelope_traces_csv(out_path(cfg, "mc_envelope_traces.csv"),
                                        report);
    } else {
        dmac::write_mc_params_csv(out_path(cfg, "mc_params_results.csv"),
                                  report);
    }
    nlohmann::json res = {
        {"trials", report.trials.size()},
        {"success_rate", report.success_rate},
    };
    dmac::write_manifest(out_path(cfg, "manifest.json"), cfg, cal, res.dump());
    std::cout << (envelope ? "mc-envelope" : "mc-params") << ": success rate "
              << report.success_rate * 100.0 << "% over "
              << report.trials.size() << " trials\n";
    return 0;
}

int cmd_calibrate(const CommonOpts& opts) {
    dmac::ExperimentConfig cfg = resolve(opts);
    cfg.mode = dmac::Mode::kCalibrate;
    const dmac::Calibration cal = dmac::calibrate(cfg);
    dmac::write_manifest(out_path(cfg, "manifest.json"), cfg, cal);
    std::cout << "alpha_scale: " << cal.alpha_scale << "  feasible thrust: ["
              << cal.feasible.t_min << ", " << cal.feasible.t_max << "] N\n";
    return 0;
}

int cmd_open_loop(const CommonOpts& opts) {
    dmac::ExperimentConfig cfg = resolve(opts);
    cfg.mode = dmac::Mode::kOpenLoopSweep;
    const dmac::Calibration cal = dmac::calibrate(cfg);
    cfg.fuel.alpha_scale = cal.alpha_scale;
    const auto points = dmac::open_loop_sweep(cfg);

    const std::string path = out_path(cfg, "open_loop.csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "r0_mm,thrust_n,pt4_pa,x_co,mdot_air,mdot_f,phi_g,t4_k,ue,rdot\n";
    for (const auto& pt : points) {
        out << dmac::format_double(pt.r0_mm) << ','
            << dmac::format_double(pt.outputs.thrust) << ','
            << dmac::format_double(pt.outputs.pt4) << ','
            << dmac::format_double(pt.outputs.x_co) << ','
            << dmac::format_double(pt.outputs.mdot_air) << ','
            << dmac::format_double(pt.outputs.mdot_f) << ','
            << dmac::format_double(pt.outputs.phi_g) << ','
            << dmac::format_double(pt.outputs.t4) << ','
            << dmac::format_double(pt.outputs.ue) << ','
            << dmac::format_double(pt.outputs.rdot) << '\n';
    }
    dmac::write_manifest(out_path(cfg, "manifest.json"), cfg, cal);
    std::cout << "open-loop sweep: " << points.size() << " points -> " << path
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SFRJ thrust-control simulation toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool double_step = false;

    CLI::App* run = app.add_subcommand("run", "closed-loop tracking run");
    run->add_flag("--double-step", double_step,
                  "100 N -> 110 N reference at step 200");
    add_common(run, opts);
    CLI::App* sweep =
        app.add_subcommand("sweep", "hyperparameter sensitivity sweep");
    add_common(sweep, opts);
    CLI::App* mcp =
        app.add_subcommand("mc-params", "Monte Carlo over (alpha, eta_c)");
    add_common(mcp, opts);
    CLI::App* mce = app.add_subcommand(
        "mc-envelope", "Monte Carlo over altitude and thrust commands");
    add_common(mce, opts);
    CLI::App* calib =
        app.add_subcommand("calibrate", "normalization + alpha calibration");
    add_common(calib, opts);
    CLI::App* ol =
        app.add_subcommand("open-loop", "steady thrust vs cowl radius sweep");
    add_common(ol, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts, double_step);
        if (sweep->parsed()) return cmd_sweep(opts);
        if (mcp->parsed()) return cmd_mc(opts, false);
        if (mce->parsed()) return cmd_mc(opts, true);
        if (calib->parsed()) return cmd_calibrate(opts);
        if (ol->parsed()) return cmd_open_loop(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
