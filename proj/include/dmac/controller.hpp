#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "dmac/lqi.hpp"
#include "dmac/normalization.hpp"
#include "dmac/rls.hpp"
#include "dmac/rng.hpp"

namespace dmac {

struct ControllerConfig {
    double r_theta_scale = 100.0;  // R_Theta = scale * I_4
    double lambda = 0.999;
    double r1_scale = 1.0;         // R_1 = scale * I_4
    double r2 = 1.0;
    double sigma_v = 1e-3;         // dither std dev, normalized units
    std::uint64_t seed = 0;
    double dare_tol = 1e-10;
    int dare_max_iter = 200;
    double q_clamp = 50.0;         // integrator anti-windup bound
};

/// Everything one step decided, for logging.
struct ControlDecision {
    double u = 0.0;                // control, dimensionless
    double v = 0.0;                // dither component of u
    double z = 0.0;                // normalized output error r - y
    double q = 0.0;                // integrator state used in this u
    Eigen::Vector3d xi = Eigen::Vector3d::Zero();
    bool synthesis_failed = false;
};

/// Adaptive thrust-tracking controller: per step it normalizes the
/// measurements into xi_k, feeds the identifier the previous regressor,
/// re-synthesizes LQI gains from the identified (A_k, B_k) with
/// C = [0 0 1], and applies
///
///     u_k = K_xi xi_k + K_q q_k + v_k,     q_{k+1} = q_k + (r_k - y_k),
///
/// all in normalized units. Gains are carried over unchanged when a
/// synthesis fails; until the first successful identification the model
/// is zero, so the output is pure dither. One instance is a sequential
/// state machine; run one per trial.
class DmacController {
public:
    DmacController(const ControllerConfig& cfg, const NormalizationMap& norm);

    /// r_phys: thrust command [N] (or normalized-units reference when the
    /// map is the identity). Measurements in the same physical units the
    /// map was calibrated for. Throws std::invalid_argument on non-finite
    /// measurements.
    ControlDecision step(double r_phys, double pt4, double x_co,
                         double thrust_phys);

    const RlsEstimator& estimator() const { return estimator_; }
    const LqiGains& gains() const { return gains_; }
    double integrator() const { return q_; }
    const NormalizationMap& norm() const { return norm_; }

    /// Dither can be rescheduled mid-run (e.g. switched off once the
    /// model has converged, for asymptotic-accuracy studies).
    void set_sigma_v(double sigma_v) { sigma_v_ = sigma_v; }

private:
    ControllerConfig cfg_;
    NormalizationMap norm_;
    RlsEstimator estimator_;
    LqiWeights weights_;
    LqiGains gains_;
    double sigma_v_;
    double q_ = 0.0;
    Rng rng_;
    std::optional<Eigen::Vector4d> prev_phi_;
};

struct CowlCommand {
    double r0;        // m
    bool saturated;   // clamped against the travel limits
};

/// Maps the dimensionless control to the physical capture radius,
/// r0 = 0.05358 - 0.001 u [m], clamped to the cowl travel range.
CowlCommand control_to_cowl(double u, double r0_nominal = 0.05358,
                            double r0_min = 0.04788, double r0_max = 0.05928);

}  // namespace dmac
