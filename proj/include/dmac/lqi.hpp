#pragma once

#include <optional>

#include <Eigen/Dense>

namespace dmac {

/// Gains for the control law u = K_xi * xi + K_q * q.
struct LqiGains {
    Eigen::MatrixXd k_xi;  // l_u x l_xi
    Eigen::MatrixXd k_q;   // l_u x l_y
};

/// LQ weights: r1 penalizes the augmented state [xi; q] (SPSD), r2 the
/// control (SPD).
struct LqiWeights {
    Eigen::MatrixXd r1;
    Eigen::MatrixXd r2;
};

/// Servo augmentation for integral action. The integrator accumulates the
/// output error, q_{k+1} = q_k + (r_k - C xi_k); the reference enters as an
/// exogenous offset and is omitted from the synthesis model:
///
///     a_bar = [ A   0 ]      b_bar = [ B ]
///             [-C   I ]              [ 0 ]
struct AugmentedSystem {
    Eigen::MatrixXd a_bar;
    Eigen::MatrixXd b_bar;
};

AugmentedSystem augment(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        const Eigen::MatrixXd& c);

/// Solves P = A'PA - A'PB (R + B'PB)^{-1} B'PA + Q by the structure-
/// preserving doubling algorithm, with a fixed-point iteration from P = Q
/// as fallback. Returns std::nullopt when neither route produces a
/// positive-semidefinite P with residual <= tol * (1 + ||P||_F) within
/// max_iter iterations. q must be SPSD and r SPD (checked).
std::optional<Eigen::MatrixXd> solve_dare(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& b,
                                          const Eigen::MatrixXd& q,
                                          const Eigen::MatrixXd& r,
                                          double tol = 1e-10,
                                          int max_iter = 200);

/// Frobenius norm of the DARE residual at P.
double dare_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                     const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                     const Eigen::MatrixXd& p);

/// Discrete LQI synthesis: augments (a, b, c), solves the DARE with
/// weights w, and returns gains signed so that u = k_xi*xi + k_q*q
/// stabilizes the augmented loop. std::nullopt if the DARE solve fails.
std::optional<LqiGains> lqi_gains(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b,
                                  const Eigen::MatrixXd& c,
                                  const LqiWeights& w,
                                  double tol = 1e-10,
                                  int max_iter = 200);

}  // namespace dmac
