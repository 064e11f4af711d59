#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dmac/rls.hpp"

using dmac::RlsEstimator;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct DataSet {
    std::vector<VectorXd> phi;      // regressors phi_0 .. phi_{k-1}
    std::vector<VectorXd> xi_next;  // responses  xi_1  .. xi_k
};

// Direct minimizer of the weighted regularized least-squares cost the
// recursion is supposed to track: with weights lambda^{k-1-j} on data pair
// j and lambda^k on the regularizer,
//   Theta = (sum w_j xi_{j+1} phi_j') (sum w_j phi_j phi_j' + lambda^k R)^-1.
MatrixXd batch_minimizer(const DataSet& d, const MatrixXd& r_theta,
                         double lambda) {
    const auto k = d.phi.size();
    const long n = r_theta.rows();
    const long l_xi = d.xi_next.front().size();
    MatrixXd cross = MatrixXd::Zero(l_xi, n);
    MatrixXd gram = MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < k; ++j) {
        const double w = std::pow(lambda, static_cast<double>(k - 1 - j));
        cross += w * d.xi_next[j] * d.phi[j].transpose();
        gram += w * d.phi[j] * d.phi[j].transpose();
    }
    gram += std::pow(lambda, static_cast<double>(k)) * r_theta;
    return gram.ldlt().solve(cross.transpose()).transpose();
}

DataSet lti_dataset(const MatrixXd& a, const MatrixXd& b, int steps,
                    unsigned seed, double input_scale = 1.0) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    const long l_xi = a.rows();
    const long l_u = b.cols();
    DataSet d;
    VectorXd x = VectorXd::NullaryExpr(l_xi, [&](Eigen::Index) { return dist(gen); });
    for (int k = 0; k < steps; ++k) {
        const VectorXd u =
            input_scale *
            VectorXd::NullaryExpr(l_u, [&](Eigen::Index) { return dist(gen); });
        VectorXd phi(l_xi + l_u);
        phi << x, u;
        x = a * x + b * u;
        d.phi.push_back(phi);
        d.xi_next.push_back(x);
    }
    return d;
}

DataSet random_dataset(int l_xi, int l_u, int steps, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    DataSet d;
    for (int k = 0; k < steps; ++k) {
        d.phi.push_back(VectorXd::NullaryExpr(
            l_xi + l_u, [&](Eigen::Index) { return dist(gen); }));
        d.xi_next.push_back(VectorXd::NullaryExpr(
            l_xi, [&](Eigen::Index) { return dist(gen); }));
    }
    return d;
}

void feed(RlsEstimator& est, const DataSet& d) {
    for (std::size_t j = 0; j < d.phi.size(); ++j) {
        est.update(d.xi_next[j], d.phi[j]);
    }
}

}  // namespace

TEST_CASE("construction: covariance is the inverse regularizer") {
    RlsEstimator est(3, 1, 100.0 * MatrixXd::Identity(4, 4), 0.999);
    CHECK(est.theta().isZero(0.0));
    CHECK(est.covariance().isApprox(0.01 * MatrixXd::Identity(4, 4), 1e-14));
    CHECK(est.step_count() == 0);

    RlsEstimator eye(1, 1, MatrixXd::Identity(2, 2), 1.0);
    CHECK(eye.covariance().isApprox(MatrixXd::Identity(2, 2), 1e-14));
    CHECK(eye.theta().isZero(0.0));

    MatrixXd diag = MatrixXd::Zero(2, 2);
    diag(0, 0) = 4.0;
    diag(1, 1) = 1.0;
    RlsEstimator dg(1, 1, diag, 1.0);
    CHECK(dg.covariance()(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(dg.covariance()(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("construction rejects bad arguments") {
    MatrixXd not_spd = MatrixXd::Identity(2, 2);
    not_spd(1, 1) = -1.0;
    CHECK_THROWS_AS(RlsEstimator(1, 1, not_spd, 1.0), std::invalid_argument);

    MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(RlsEstimator(1, 1, asym, 1.0), std::invalid_argument);

    const MatrixXd eye = MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(RlsEstimator(1, 1, eye, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RlsEstimator(1, 1, eye, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(RlsEstimator(1, 1, eye, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(RlsEstimator(1, 1, MatrixXd::Identity(3, 3), 1.0),
                    std::invalid_argument);
}

TEST_CASE("single update matches the hand-evaluated recursion") {
    // Theta0 = 0, P0 = I2, phi0 = [1 0]', xi1 = 2, lambda = 1:
    // gamma = 2, P1 = diag(1/2, 1), Theta1 = [1 0].
    RlsEstimator est(1, 1, MatrixXd::Identity(2, 2), 1.0);
    VectorXd phi(2);
    phi << 1.0, 0.0;
    VectorXd xi(1);
    xi << 2.0;
    est.update(xi, phi);
    CHECK(est.theta()(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(est.theta()(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(est.covariance()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(est.covariance()(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(est.covariance()(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(est.step_count() == 1);
}

TEST_CASE("zero regressor only rescales the covariance") {
    const double lambda = 0.95;
    RlsEstimator est(2, 1, MatrixXd::Identity(3, 3), lambda);
    // move away from the initial state first
    DataSet d = random_dataset(2, 1, 5, 11);
    feed(est, d);
    const MatrixXd theta_before = est.theta();
    const MatrixXd cov_before = est.covariance();
    est.update(VectorXd::Ones(2), VectorXd::Zero(3));
    CHECK(est.theta().isApprox(theta_before, 1e-14));
    CHECK(est.covariance().isApprox(cov_before / lambda, 1e-14));
}

TEST_CASE("update rejects non-finite input and wrong shapes") {
    RlsEstimator est(1, 1, MatrixXd::Identity(2, 2), 1.0);
    VectorXd bad(2);
    bad << std::numeric_limits<double>::quiet_NaN(), 0.0;
    CHECK_THROWS_AS(est.update(VectorXd::Ones(1), bad), std::invalid_argument);
    VectorXd inf_xi(1);
    inf_xi << std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(est.update(inf_xi, VectorXd::Ones(2)), std::invalid_argument);
    CHECK_THROWS_AS(est.update(VectorXd::Ones(2), VectorXd::Ones(2)),
                    std::invalid_argument);
}

TEST_CASE("extract and predict") {
    RlsEstimator est(3, 1, MatrixXd::Identity(4, 4), 1.0);
    CHECK(est.a_matrix().isZero(0.0));
    CHECK(est.b_matrix().isZero(0.0));
    CHECK(est.predict(VectorXd::Ones(3), VectorXd::Ones(1)).isZero(0.0));

    // drive the estimator to Theta = [I3 | e1] with noiseless data
    MatrixXd a = MatrixXd::Identity(3, 3);
    MatrixXd b = MatrixXd::Zero(3, 1);
    b(0, 0) = 1.0;
    RlsEstimator fit(3, 1, 1e-9 * MatrixXd::Identity(4, 4), 1.0);
    feed(fit, lti_dataset(0.5 * a, b, 80, 21));  // stable variant for data
    // identify the true pair instead via exact equality on predictions
    const MatrixXd theta = fit.theta();
    CHECK(fit.a_matrix() == theta.leftCols(3));
    CHECK(fit.b_matrix() == theta.rightCols(1));

    VectorXd xi(3);
    xi << 1.0, 2.0, 3.0;
    VectorXd u(1);
    u << 5.0;
    VectorXd phi(4);
    phi << xi, u;
    CHECK(fit.predict(xi, u).isApprox(theta * phi, 1e-14));
}

TEST_CASE("exact identification of a stable LTI pair") {
    MatrixXd a(3, 3);
    a << 0.8, 0.1, 0.0, 0.05, 0.7, 0.1, 0.1, 0.2, 0.85;
    MatrixXd b(3, 1);
    b << 0.5, 0.3, 0.4;
    MatrixXd truth(3, 4);
    truth << a, b;

    RlsEstimator est(3, 1, 1e-6 * MatrixXd::Identity(4, 4), 1.0);
    feed(est, lti_dataset(a, b, 200, 42, 3.0));
    CHECK((est.theta() - truth).norm() < 1e-6);
    CHECK(est.a_matrix().isApprox(a, 1e-5));
    CHECK(est.b_matrix().isApprox(b, 1e-5));

    // held-out prediction
    DataSet held = lti_dataset(a, b, 50, 43, 3.0);
    for (std::size_t j = 0; j < held.phi.size(); ++j) {
        const VectorXd pred = est.theta() * held.phi[j];
        CHECK((pred - held.xi_next[j]).norm() < 1e-6);
    }
}

TEST_CASE("batch equivalence at lambda = 1") {
    for (unsigned seed : {1u, 2u, 3u, 4u}) {
        const int l_xi = 1 + static_cast<int>(seed % 4);
        const DataSet d = random_dataset(l_xi, 1, 50, seed);
        const MatrixXd r_theta = 2.0 * MatrixXd::Identity(l_xi + 1, l_xi + 1);
        RlsEstimator est(l_xi, 1, r_theta, 1.0);
        feed(est, d);
        const MatrixXd direct = batch_minimizer(d, r_theta, 1.0);
        CHECK((est.theta() - direct).norm() / direct.norm() < 1e-8);
    }
}

TEST_CASE("batch equivalence holds with forgetting too") {
    const DataSet d = random_dataset(2, 1, 40, 7);
    const MatrixXd r_theta = MatrixXd::Identity(3, 3);
    RlsEstimator est(2, 1, r_theta, 0.97);
    feed(est, d);
    const MatrixXd direct = batch_minimizer(d, r_theta, 0.97);
    CHECK((est.theta() - direct).norm() / direct.norm() < 1e-8);
}

TEST_CASE("covariance stays exactly symmetric") {
    const DataSet d = random_dataset(3, 1, 60, 5);
    RlsEstimator est(3, 1, 100.0 * MatrixXd::Identity(4, 4), 0.999);
    for (std::size_t j = 0; j < d.phi.size(); ++j) {
        est.update(d.xi_next[j], d.phi[j]);
        CHECK((est.covariance() - est.covariance().transpose()).norm() == 0.0);
    }
}

TEST_CASE("covariance is monotone non-increasing at lambda = 1") {
    const DataSet d = random_dataset(3, 1, 60, 9);
    RlsEstimator est(3, 1, MatrixXd::Identity(4, 4), 1.0);
    MatrixXd prev = est.covariance();
    for (std::size_t j = 0; j < d.phi.size(); ++j) {
        est.update(d.xi_next[j], d.phi[j]);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(est.covariance() - prev);
        CHECK(es.eigenvalues().maxCoeff() <= 1e-12);
        prev = est.covariance();
    }
}

TEST_CASE("permuting the data does not change the lambda = 1 estimate") {
    DataSet d = random_dataset(3, 1, 30, 13);
    const MatrixXd r_theta = MatrixXd::Identity(4, 4);
    RlsEstimator fwd(3, 1, r_theta, 1.0);
    feed(fwd, d);

    std::vector<std::size_t> idx(d.phi.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937 gen(99);
    std::shuffle(idx.begin(), idx.end(), gen);
    RlsEstimator perm(3, 1, r_theta, 1.0);
    for (const std::size_t j : idx) perm.update(d.xi_next[j], d.phi[j]);

    CHECK((fwd.theta() - perm.theta()).norm() < 1e-10);
}

TEST_CASE("forgetting tracks a parameter jump better than lambda = 1") {
    MatrixXd a1(2, 2), a2(2, 2);
    a1 << 0.9, 0.0, 0.1, 0.8;
    a2 << 0.3, 0.2, -0.1, 0.5;
    MatrixXd b1(2, 1), b2(2, 1);
    b1 << 1.0, 0.5;
    b2 << 0.2, 1.0;
    DataSet first = lti_dataset(a1, b1, 200, 17);
    DataSet second = lti_dataset(a2, b2, 200, 18);
    MatrixXd truth(2, 3);
    truth << a2, b2;

    auto terminal_error = [&](double lambda) {
        RlsEstimator est(2, 1, MatrixXd::Identity(3, 3), lambda);
        feed(est, first);
        feed(est, second);
        return (est.theta() - truth).norm();
    };
    CHECK(terminal_error(0.98) < terminal_error(1.0));
}

TEST_CASE("conditioning guard resets a blown-up covariance") {
    // Repeating one regressor direction under heavy forgetting inflates P
    // along everything orthogonal to it until the guard trips.
    RlsEstimator est(1, 1, MatrixXd::Identity(2, 2), 0.5);
    VectorXd phi(2);
    phi << 1.0, 0.0;
    VectorXd xi(1);
    xi << 1.0;
    for (int i = 0; i < 200 && est.covariance_resets() == 0; ++i) {
        est.update(xi, phi);
    }
    CHECK(est.covariance_resets() > 0);
    // after the reset the covariance is back at P0
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(est.covariance());
    CHECK(es.eigenvalues().maxCoeff() < 1e12 * es.eigenvalues().minCoeff());
}
