#include "dmac/lqi.hpp"

#include <cmath>
#include <stdexcept>

namespace dmac {

namespace {

bool is_psd(const Eigen::MatrixXd& m, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.info() == Eigen::Success && es.eigenvalues().minCoeff() >= -tol;
}

bool residual_ok(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                 const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                 const Eigen::MatrixXd& p, double tol) {
    return p.allFinite() &&
           dare_residual(a, b, q, r, p) <= tol * (1.0 + p.norm());
}

// Structure-preserving doubling (Chu, Fan, Lin & Wang 2004). Quadratically
// convergent on stabilizable/detectable instances; breakdown is reported,
// not repaired.
std::optional<Eigen::MatrixXd> solve_dare_sda(const Eigen::MatrixXd& a,
                                              const Eigen::MatrixXd& b,
                                              const Eigen::MatrixXd& q,
                                              const Eigen::MatrixXd& r,
                                              double tol, int max_iter) {
    const long n = a.rows();
    Eigen::LLT<Eigen::MatrixXd> r_llt(r);
    if (r_llt.info() != Eigen::Success) return std::nullopt;

    Eigen::MatrixXd a_k = a;
    Eigen::MatrixXd g_k = b * r_llt.solve(b.transpose());
    Eigen::MatrixXd h_k = q;

    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd w =
            Eigen::MatrixXd::Identity(n, n) + g_k * h_k;
        Eigen::PartialPivLU<Eigen::MatrixXd> w_lu(w);
        const Eigen::MatrixXd v1 = w_lu.solve(a_k);
        const Eigen::MatrixXd v2 = w_lu.solve(g_k.transpose()).transpose();

        g_k += a_k * v2 * a_k.transpose();
        const Eigen::MatrixXd h_next = h_k + v1.transpose() * h_k * a_k;
        a_k = (a_k * v1).eval();

        if (!h_next.allFinite() || !g_k.allFinite() || !a_k.allFinite()) {
            return std::nullopt;
        }
        const double step = (h_next - h_k).norm();
        h_k = 0.5 * (h_next + h_next.transpose());
        if (!is_psd(h_k, 1e-8 * (1.0 + h_k.norm()))) return std::nullopt;
        if (step <= tol * (1.0 + h_k.norm())) return h_k;
    }
    return std::nullopt;
}

// Riccati difference iteration from P = Q. Linearly convergent backstop.
std::optional<Eigen::MatrixXd> solve_dare_fixed_point(const Eigen::MatrixXd& a,
                                                      const Eigen::MatrixXd& b,
                                                      const Eigen::MatrixXd& q,
                                                      const Eigen::MatrixXd& r,
                                                      double tol, int max_iter) {
    Eigen::MatrixXd p = q;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd btp = b.transpose() * p;
        const Eigen::MatrixXd s = r + btp * b;
        Eigen::LLT<Eigen::MatrixXd> s_llt(s);
        if (s_llt.info() != Eigen::Success) return std::nullopt;
        Eigen::MatrixXd p_next =
            q + a.transpose() * p * a -
            (btp * a).transpose() * s_llt.solve(btp * a);
        p_next = 0.5 * (p_next + p_next.transpose()).eval();
        if (!p_next.allFinite()) return std::nullopt;
        const double step = (p_next - p).norm();
        p = p_next;
        if (step <= tol * (1.0 + p.norm())) return p;
    }
    return std::nullopt;
}

}  // namespace

AugmentedSystem augment(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        const Eigen::MatrixXd& c) {
    const long l_xi = a.rows();
    const long l_u = b.cols();
    const long l_y = c.rows();
    if (a.cols() != l_xi || b.rows() != l_xi || c.cols() != l_xi) {
        throw std::invalid_argument("augment: inconsistent dimensions");
    }
    AugmentedSystem sys;
    sys.a_bar = Eigen::MatrixXd::Zero(l_xi + l_y, l_xi + l_y);
    sys.a_bar.topLeftCorner(l_xi, l_xi) = a;
    sys.a_bar.bottomLeftCorner(l_y, l_xi) = -c;
    sys.a_bar.bottomRightCorner(l_y, l_y) =
        Eigen::MatrixXd::Identity(l_y, l_y);
    sys.b_bar = Eigen::MatrixXd::Zero(l_xi + l_y, l_u);
    sys.b_bar.topRows(l_xi) = b;
    return sys;
}

double dare_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                     const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                     const Eigen::MatrixXd& p) {
    const Eigen::MatrixXd btp_a = b.transpose() * p * a;
    const Eigen::MatrixXd s = r + b.transpose() * p * b;
    const Eigen::MatrixXd res =
        a.transpose() * p * a - btp_a.transpose() * s.llt().solve(btp_a) + q - p;
    return res.norm();
}

std::optional<Eigen::MatrixXd> solve_dare(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& b,
                                          const Eigen::MatrixXd& q,
                                          const Eigen::MatrixXd& r,
                                          double tol, int max_iter) {
    const long n = a.rows();
    const long m = b.cols();
    if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
        r.rows() != m || r.cols() != m) {
        throw std::invalid_argument("solve_dare: inconsistent dimensions");
    }
    if (!q.isApprox(q.transpose(), 1e-10) || !is_psd(q, 1e-10 * (1.0 + q.norm()))) {
        throw std::invalid_argument("solve_dare: q must be symmetric PSD");
    }
    if (!r.isApprox(r.transpose(), 1e-10) ||
        Eigen::LLT<Eigen::MatrixXd>(r).info() != Eigen::Success) {
        throw std::invalid_argument("solve_dare: r must be symmetric positive definite");
    }

    auto p = solve_dare_sda(a, b, q, r, tol, max_iter);
    if (p && residual_ok(a, b, q, r, *p, tol)) return p;

    // Doubling broke down (or stalled shy of the tolerance); the fixed-point
    // iteration is slower but trivially correct, so give it a longer leash.
    p = solve_dare_fixed_point(a, b, q, r, tol, 50 * max_iter);
    if (p && residual_ok(a, b, q, r, *p, tol) &&
        is_psd(*p, 1e-10 * (1.0 + p->norm()))) {
        return p;
    }
    return std::nullopt;
}

std::optional<LqiGains> lqi_gains(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b,
                                  const Eigen::MatrixXd& c,
                                  const LqiWeights& w,
                                  double tol, int max_iter) {
    const AugmentedSystem sys = augment(a, b, c);

    // No control authority: any gain is a minimizer, zero is the natural
    // one. (The augmented pair is not stabilizable here, so the DARE has
    // no finite solution to hand us.)
    if (b.isZero(0.0)) {
        LqiGains zero;
        zero.k_xi = Eigen::MatrixXd::Zero(b.cols(), a.rows());
        zero.k_q = Eigen::MatrixXd::Zero(b.cols(), c.rows());
        return zero;
    }

    const auto p = solve_dare(sys.a_bar, sys.b_bar, w.r1, w.r2, tol, max_iter);
    if (!p) return std::nullopt;

    const Eigen::MatrixXd btp = sys.b_bar.transpose() * (*p);
    const Eigen::MatrixXd s = w.r2 + btp * sys.b_bar;
    // u = -K [xi; q] internally; exported with the sign flipped so the
    // control law reads u = k_xi*xi + k_q*q.
    const Eigen::MatrixXd k = s.llt().solve(btp * sys.a_bar);
    if (!k.allFinite()) return std::nullopt;

    const long l_xi = a.rows();
    const long l_y = c.rows();
    LqiGains gains;
    gains.k_xi = -k.leftCols(l_xi);
    gains.k_q = -k.rightCols(l_y);
    return gains;
}

}  // namespace dmac
