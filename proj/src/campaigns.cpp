#include "dmac/campaigns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "dmac/rng.hpp"

namespace dmac {

namespace {

// Runs fn(trial_index) across a worker pool; each index is claimed once,
// so results land in pre-sized slots and ordering never matters.
void parallel_for_trials(int n_trials, int parallel,
                         const std::function<void(int)>& fn) {
    int workers = parallel > 0
                      ? parallel
                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n_trials));
    if (workers == 1) {
        for (int i = 0; i < n_trials; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_trials; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

double truncated_gaussian(Rng& rng, double mean, double sigma, double lo,
                          double hi) {
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.gaussian(mean, sigma);
        if (x > lo && x <= hi) return x;
    }
    return mean;  // sigma pathologically large; fall back to the mean
}

}  // namespace

SweepReport sensitivity_sweep(const ExperimentConfig& cfg,
                              const Calibration& calibration) {
    struct Grid {
        const char* name;
        std::vector<double> values;
        void (*apply)(ControllerConfig&, double);
    };
    const std::vector<Grid> grids = {
        {"r_theta_scale",
         {1.0, 10.0, 100.0, 1e3, 1e4},
         [](ControllerConfig& c, double v) { c.r_theta_scale = v; }},
        {"lambda",
         {0.99, 0.995, 0.999, 0.9995, 1.0},
         [](ControllerConfig& c, double v) { c.lambda = v; }},
        {"r1_scale",
         {0.01, 0.1, 1.0, 10.0, 100.0},
         [](ControllerConfig& c, double v) { c.r1_scale = v; }},
        {"r2",
         {0.01, 0.1, 1.0, 10.0, 100.0},
         [](ControllerConfig& c, double v) { c.r2 = v; }},
    };

    SweepReport report;
    for (const auto& grid : grids) {
        for (const double value : grid.values) {
            ExperimentConfig run_cfg = cfg;
            grid.apply(run_cfg.controller, value);
            SweepRow row;
            row.parameter = grid.name;
            row.value = value;
            try {
                row.trial = run_closed_loop(run_cfg, calibration).trial;
            } catch (const std::exception& e) {
                row.trial.converged = false;
                row.trial.diverged_reason = e.what();
            }
            if (row.trial.converged) ++report.converged;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

McReport monte_carlo_params(const ExperimentConfig& cfg,
                            const Calibration& calibration, int n_trials,
                            std::uint64_t seed) {
    McReport report;
    report.trials.resize(n_trials);

    parallel_for_trials(n_trials, cfg.mc.parallel, [&](int i) {
        const std::uint64_t trial_seed = derive_seed(seed, i);
        Rng rng(trial_seed);
        FuelModel fm = cfg.fuel;
        fm.alpha = truncated_gaussian(rng, cfg.mc.alpha_mean, cfg.mc.alpha_sigma,
                                      0.0, std::numeric_limits<double>::max());
        fm.eta_c = truncated_gaussian(rng, cfg.mc.eta_c_mean, cfg.mc.eta_c_sigma,
                                      0.0, 1.0);

        ExperimentConfig run_cfg = cfg;
        run_cfg.controller.seed = derive_seed(trial_seed, 1);
        TrialResult trial;
        try {
            trial = run_closed_loop(run_cfg, calibration, &fm).trial;
        } catch (const std::exception& e) {
            trial.converged = false;
            trial.diverged_reason = e.what();
        }
        trial.alpha = fm.alpha;
        trial.eta_c = fm.eta_c;
        report.trials[i] = std::move(trial);
    });

    const auto n_ok = std::count_if(report.trials.begin(), report.trials.end(),
                                    [](const TrialResult& t) { return t.converged; });
    report.success_rate = static_cast<double>(n_ok) / n_trials;
    return report;
}

McReport monte_carlo_envelope(const ExperimentConfig& cfg,
                              const Calibration& calibration, int n_trials,
                              std::uint64_t seed) {
    McReport report;
    report.trials.resize(n_trials);
    std::vector<std::vector<McReport::TracePoint>> traces(n_trials);

    parallel_for_trials(n_trials, cfg.mc.parallel, [&](int i) {
        const std::uint64_t trial_seed = derive_seed(seed, i);
        Rng rng(trial_seed);
        TrialResult trial;
        trial.altitude = rng.uniform(cfg.mc.altitude_min, cfg.mc.altitude_max);
        trial.alpha = cfg.fuel.alpha;
        trial.eta_c = cfg.fuel.eta_c;

        try {
            const FlightCondition fc =
                make_flight_condition(cfg.mach, trial.altitude);
            FuelModel fm = cfg.fuel;
            fm.alpha_scale = calibration.alpha_scale;

            // Per-altitude calibration: fresh channel bounds and feasible
            // range; the plant parameters themselves stay nominal.
            Calibration local;
            local.alpha_scale = calibration.alpha_scale;
            local.norm = calibrate_normalization(fc, cfg.geometry, fm,
                                                 &local.feasible);
            const double delta = local.feasible.t_max - local.feasible.t_min;
            const double lo = local.feasible.t_min + cfg.mc.margin_frac * delta;
            const double hi = local.feasible.t_max - cfg.mc.margin_frac * delta;

            trial.converged = true;
            for (int j = 0; j < cfg.mc.commands_per_trial; ++j) {
                const double command = rng.uniform(lo, hi);
                trial.commands.push_back(command);

                ExperimentConfig run_cfg = cfg;
                run_cfg.controller.seed = derive_seed(trial_seed, 1 + j);
                run_cfg.run.reference =
                    ReferenceSpec({{0, command}});
                const RunResult rr =
                    run_closed_loop(run_cfg, local, nullptr, &fc);
                trial.command_converged.push_back(rr.trial.converged);
                trial.terminal_error =
                    std::max(trial.terminal_error, rr.trial.terminal_error);
                if (!rr.trial.converged) {
                    trial.converged = false;
                    if (!rr.trial.diverged_reason.empty()) {
                        trial.diverged_reason = rr.trial.diverged_reason;
                    }
                } else {
                    for (const auto& rec : rr.records) {
                        traces[i].push_back(
                            {i, j, rec.k, rec.y_n / command});
                    }
                }
            }
        } catch (const std::exception& e) {
            trial.converged = false;
            trial.diverged_reason = e.what();
        }
        report.trials[i] = std::move(trial);
    });

    for (auto& t : traces) {
        report.traces.insert(report.traces.end(), t.begin(), t.end());
    }
    const auto n_ok = std::count_if(report.trials.begin(), report.trials.end(),
                                    [](const TrialResult& t) { return t.converged; });
    report.success_rate = static_cast<double>(n_ok) / n_trials;
    return report;
}

double rank_correlation(const std::vector<double>& x,
                        const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) {
        throw std::invalid_argument("rank_correlation: need matched series, n >= 2");
    }
    auto midranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> ranks(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double rank = 0.5 * (i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
            i = j + 1;
        }
        return ranks;
    };
    const std::vector<double> rx = midranks(x);
    const std::vector<double> ry = midranks(y);
    const double mean = (n + 1) / 2.0;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

}  // namespace dmac
