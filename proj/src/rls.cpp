#include "dmac/rls.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dmac {

namespace {

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    return m.allFinite();
}

}  // namespace

RlsEstimator::RlsEstimator(int l_xi, int l_u, const Eigen::MatrixXd& r_theta,
                           double lambda)
    : l_xi_(l_xi), l_u_(l_u), lambda_(lambda) {
    if (l_xi < 1 || l_u < 1) {
        throw std::invalid_argument("RlsEstimator: dimensions must be positive");
    }
    const int n = l_xi + l_u;
    if (r_theta.rows() != n || r_theta.cols() != n) {
        std::ostringstream os;
        os << "RlsEstimator: r_theta must be " << n << "x" << n << ", got "
           << r_theta.rows() << "x" << r_theta.cols();
        throw std::invalid_argument(os.str());
    }
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("RlsEstimator: lambda must lie in (0, 1]");
    }
    if (!all_finite(r_theta) || !r_theta.isApprox(r_theta.transpose(), 1e-12)) {
        throw std::invalid_argument("RlsEstimator: r_theta must be symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(r_theta);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("RlsEstimator: r_theta must be positive definite");
    }
    theta_ = Eigen::MatrixXd::Zero(l_xi, n);
    cov_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
    cov0_ = cov_;
}

void RlsEstimator::update(const Eigen::VectorXd& xi_next,
                          const Eigen::VectorXd& phi_prev) {
    const int n = l_xi_ + l_u_;
    if (xi_next.size() != l_xi_ || phi_prev.size() != n) {
        throw std::invalid_argument("RlsEstimator::update: dimension mismatch");
    }
    if (!all_finite(xi_next) || !all_finite(phi_prev)) {
        throw std::invalid_argument("RlsEstimator::update: non-finite input");
    }

    // gamma = lambda + phi' P phi; analytically >= lambda > 0, so a
    // collapse below the threshold signals corrupted state.
    const Eigen::VectorXd p_phi = cov_ * phi_prev;
    const double gamma = lambda_ + phi_prev.dot(p_phi);
    if (!(gamma > 1e-12)) {
        throw std::runtime_error("RlsEstimator::update: gain denominator degenerate");
    }

    cov_ = (cov_ - p_phi * (phi_prev.transpose() * cov_) / gamma) / lambda_;
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();

    theta_ += (xi_next - theta_ * phi_prev) * (phi_prev.transpose() * cov_);
    ++step_count_;

    // Conditioning guard: without persistent excitation the covariance can
    // blow up under forgetting. Reset P, keep Theta.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
    const double ev_min = es.eigenvalues().minCoeff();
    const double ev_max = es.eigenvalues().maxCoeff();
    if (!(ev_min > 0.0) || ev_max > 1e12 * ev_min) {
        cov_ = cov0_;
        ++cov_resets_;
    }
}

Eigen::VectorXd RlsEstimator::predict(const Eigen::VectorXd& xi,
                                      const Eigen::VectorXd& u) const {
    if (xi.size() != l_xi_ || u.size() != l_u_) {
        throw std::invalid_argument("RlsEstimator::predict: dimension mismatch");
    }
    Eigen::VectorXd phi(l_xi_ + l_u_);
    phi << xi, u;
    return theta_ * phi;
}

}  // namespace dmac
