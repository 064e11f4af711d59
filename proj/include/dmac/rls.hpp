#pragma once

#include <Eigen/Dense>

namespace dmac {

/// Recursive least-squares identifier for the one-step linear model
///
///     xi_{k+1} = Theta * phi_k,   phi_k = [xi_k; u_k],  Theta = [A B],
///
/// minimizing the exponentially weighted, regularized cost
///
///     J_k(Theta) = sum_i lambda^{k-i} ||xi_i - Theta phi_{i-1}||^2
///                  + lambda^k tr(Theta R_Theta Theta^T).
///
/// The update is the standard covariance form with forgetting factor
/// lambda; the covariance is re-symmetrized after every step and reset
/// to its initial value if its condition number exceeds 1e12.
class RlsEstimator {
public:
    /// r_theta must be symmetric positive definite; lambda in (0, 1].
    /// Starts from Theta = 0, P = r_theta^{-1}.
    RlsEstimator(int l_xi, int l_u, const Eigen::MatrixXd& r_theta, double lambda);

    /// Process one data pair: the regressor phi_prev = [xi_{k-1}; u_{k-1}]
    /// and the state xi_next it produced. Throws std::invalid_argument on
    /// dimension mismatch or non-finite input, std::runtime_error if the
    /// gain denominator gamma collapses below 1e-12.
    void update(const Eigen::VectorXd& xi_next, const Eigen::VectorXd& phi_prev);

    /// Left l_xi columns of Theta.
    Eigen::MatrixXd a_matrix() const { return theta_.leftCols(l_xi_); }
    /// Right l_u columns of Theta.
    Eigen::MatrixXd b_matrix() const { return theta_.rightCols(l_u_); }

    /// One-step prediction Theta * [xi; u].
    Eigen::VectorXd predict(const Eigen::VectorXd& xi, const Eigen::VectorXd& u) const;

    const Eigen::MatrixXd& theta() const { return theta_; }
    const Eigen::MatrixXd& covariance() const { return cov_; }
    double lambda() const { return lambda_; }
    long step_count() const { return step_count_; }
    int l_xi() const { return l_xi_; }
    int l_u() const { return l_u_; }
    /// Number of covariance resets triggered by the conditioning guard.
    long covariance_resets() const { return cov_resets_; }

private:
    int l_xi_;
    int l_u_;
    double lambda_;
    Eigen::MatrixXd theta_;   // l_xi x (l_xi + l_u)
    Eigen::MatrixXd cov_;     // (l_xi + l_u) square
    Eigen::MatrixXd cov0_;    // reset target for the conditioning guard
    long step_count_ = 0;
    long cov_resets_ = 0;
};

}  // namespace dmac
