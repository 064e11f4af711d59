#include "dmac/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmac {

namespace {

Eigen::MatrixXd output_matrix() {
    Eigen::MatrixXd c(1, 3);
    c << 0.0, 0.0, 1.0;  // thrust is the third state entry
    return c;
}

}  // namespace

DmacController::DmacController(const ControllerConfig& cfg,
                               const NormalizationMap& norm)
    : cfg_(cfg),
      norm_(norm),
      estimator_(3, 1, cfg.r_theta_scale * Eigen::MatrixXd::Identity(4, 4),
                 cfg.lambda),
      sigma_v_(cfg.sigma_v),
      rng_(cfg.seed) {
    if (!(cfg.sigma_v >= 0.0)) {
        throw std::invalid_argument("DmacController: sigma_v must be >= 0");
    }
    weights_.r1 = cfg.r1_scale * Eigen::MatrixXd::Identity(4, 4);
    weights_.r2 = Eigen::MatrixXd::Constant(1, 1, cfg.r2);
    gains_.k_xi = Eigen::MatrixXd::Zero(1, 3);
    gains_.k_q = Eigen::MatrixXd::Zero(1, 1);
}

ControlDecision DmacController::step(double r_phys, double pt4, double x_co,
                                     double thrust_phys) {
    if (!std::isfinite(r_phys) || !std::isfinite(pt4) || !std::isfinite(x_co) ||
        !std::isfinite(thrust_phys)) {
        throw std::invalid_argument("DmacController::step: non-finite measurement");
    }

    ControlDecision dec;
    dec.xi = norm_.normalize_state(pt4, x_co, thrust_phys);

    if (prev_phi_) {
        estimator_.update(dec.xi, *prev_phi_);
    }

    const auto gains = lqi_gains(estimator_.a_matrix(), estimator_.b_matrix(),
                                 output_matrix(), weights_, cfg_.dare_tol,
                                 cfg_.dare_max_iter);
    if (gains) {
        gains_ = *gains;
    } else {
        dec.synthesis_failed = true;  // keep previous gains
    }

    dec.v = sigma_v_ > 0.0 ? rng_.gaussian(0.0, sigma_v_) : 0.0;
    dec.q = q_;
    dec.u = (gains_.k_xi * dec.xi)(0) + gains_.k_q(0, 0) * q_ + dec.v;

    dec.z = norm_.thrust.normalize(r_phys) - norm_.thrust.normalize(thrust_phys);
    q_ = std::clamp(q_ + dec.z, -cfg_.q_clamp, cfg_.q_clamp);

    Eigen::Vector4d phi;
    phi << dec.xi, dec.u;
    prev_phi_ = phi;
    return dec;
}

CowlCommand control_to_cowl(double u, double r0_nominal, double r0_min,
                            double r0_max) {
    const double raw = r0_nominal - 0.001 * u;
    CowlCommand cmd;
    cmd.r0 = std::clamp(raw, r0_min, r0_max);
    cmd.saturated = raw != cmd.r0;
    return cmd;
}

}  // namespace dmac
