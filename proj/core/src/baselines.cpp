#include "spikecount/baselines.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace spikecount::baselines {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SpectralResult top_eigpair_sym(const Eigen::MatrixXd& A, double tol, int max_iter,
                               std::uint64_t seed) {
    const Eigen::Index n = A.rows();
    if (n == 0 || A.cols() != n) throw ParamError("top_eigpair_sym requires a square matrix");

    // Shift so the target (largest) eigenvalue is also largest in magnitude.
    const double shift = A.cwiseAbs().rowwise().sum().maxCoeff();  // Gershgorin bound

    // Fixed start plus a dash of seeded noise to avoid orthogonal stalls.
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] += 0.01 * normal(gen);
    v.normalize();

    SpectralResult res;
    for (int it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXd av = A * v;
        const double theta = v.dot(av);
        const double resid = (av - theta * v).norm();
        res.top_value = theta;
        res.top_vector = v;
        res.iterations = it;
        res.residual = resid;
        if (resid <= tol) return res;
        Eigen::VectorXd w = av + shift * v;
        const double norm = w.norm();
        if (norm == 0.0) {
            res.top_value = -shift;
            res.residual = 0.0;
            return res;
        }
        v = w / norm;
    }
    throw ConvergenceError("power iteration did not converge", res);
}

double bbp_wigner_predict(double lambda) {
    if (lambda <= 1.0) return 2.0;
    return lambda + 1.0 / lambda;
}

BbpWishart bbp_wishart_predict(double lambda, double gamma) {
    if (!(gamma > 0.0)) throw ParamError("bbp_wishart_predict requires gamma > 0");
    BbpWishart out;
    out.bulk_edge = (1.0 + std::sqrt(gamma)) * (1.0 + std::sqrt(gamma));
    if (lambda > 0.0 && lambda * lambda > gamma) {
        out.spike_location = (1.0 + lambda) * (1.0 + gamma / lambda);
    } else {
        out.spike_location = out.bulk_edge;
    }
    return out;
}

SpectralResult pls_stat(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
        throw ParamError("pls_stat requires matrices of equal shape");
    }
    const Eigen::MatrixXd S = X * Y.transpose();
    SpectralResult res = top_eigpair_sym(S * S.transpose());
    res.top_value = std::sqrt(std::max(0.0, res.top_value));
    return res;
}

namespace {

// Real roots of c0 + c1 x + c2 x^2 + c3 x^3, degenerate degrees included.
std::vector<double> real_roots_cubic(double c0, double c1, double c2, double c3) {
    std::vector<double> roots;
    const double scale = std::max({std::abs(c0), std::abs(c1), std::abs(c2), std::abs(c3)});
    if (scale == 0.0) return roots;
    const double eps = 1e-12 * scale;

    if (std::abs(c3) > eps) {
        Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
        comp(1, 0) = 1.0;
        comp(2, 1) = 1.0;
        comp(0, 2) = -c0 / c3;
        comp(1, 2) -= c1 / c3;
        comp(2, 2) -= c2 / c3;
        Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
        for (int i = 0; i < 3; ++i) {
            const auto ev = es.eigenvalues()[i];
            if (std::abs(ev.imag()) < 1e-8 * std::max(1.0, std::abs(ev.real()))) {
                roots.push_back(ev.real());
            }
        }
    } else if (std::abs(c2) > eps) {
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            roots.push_back((-c1 + s) / (2.0 * c2));
            roots.push_back((-c1 - s) / (2.0 * c2));
        }
    } else if (std::abs(c1) > eps) {
        roots.push_back(-c0 / c1);
    }

    // Newton polish against the original polynomial.
    const auto poly = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
    const auto dpoly = [&](double x) { return (3.0 * c3 * x + 2.0 * c2) * x + c1; };
    for (double& x : roots) {
        for (int it = 0; it < 30; ++it) {
            const double df = dpoly(x);
            if (std::abs(df) < 1e-300) break;
            const double step = poly(x) / df;
            x -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
        }
    }
    return roots;
}

}  // namespace

double pls_threshold(double lambda, double mu, double rho) {
    if (lambda < 0 || mu < 0 || rho < 0) throw ParamError("pls_threshold needs nonneg parameters");
    const double l2 = lambda * lambda, m2 = mu * mu, r2 = rho * rho;
    const double c0 = 1.0;
    const double c1 = 1.0 - r2 * l2 * m2 - l2 - m2;
    const double c2 = l2 * m2 - l2 - m2;
    const double c3 = l2 * m2;

    constexpr double hi = 1e3;
    double best = -kInf;
    for (double x : real_roots_cubic(c0, c1, c2, c3)) {
        if (x <= hi) best = std::max(best, x);
    }
    return best == -kInf ? kInf : best;
}

SpectralResult cca_stat(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
        throw ParamError("cca_stat requires matrices of equal shape");
    }
    if (X.rows() > X.cols()) throw ParamError("cca_stat requires n <= N");

    const auto inv_sqrt = [](const Eigen::MatrixXd& G) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        const Eigen::VectorXd& ev = es.eigenvalues();
        if (ev.minCoeff() < 1e-10) throw NumericError("cca_stat: singular Gram matrix");
        const Eigen::VectorXd inv = ev.cwiseSqrt().cwiseInverse();
        return Eigen::MatrixXd(es.eigenvectors() * inv.asDiagonal() *
                               es.eigenvectors().transpose());
    };

    // Canonical correlation matrix in whitened bases; its singular values
    // lie in [0, 1].
    const Eigen::MatrixXd gx = inv_sqrt(X * X.transpose());
    const Eigen::MatrixXd gy = inv_sqrt(Y * Y.transpose());
    const Eigen::MatrixXd M = gx * (X * Y.transpose()) * gy;
    SpectralResult res = top_eigpair_sym(M * M.transpose());
    res.top_value = std::sqrt(std::max(0.0, res.top_value));
    return res;
}

double cca_condition_value(double lambda, double mu, double rho, double gamma) {
    if (!(gamma > 0.0)) throw ParamError("cca_condition requires gamma > 0");
    const double l2 = lambda * lambda, m2 = mu * mu, r2 = rho * rho;
    return l2 * m2 * r2 * (1.0 / gamma - 1.0) / ((l2 + 1.0) * (m2 + 1.0));
}

bool cca_condition(double lambda, double mu, double rho, double gamma) {
    return cca_condition_value(lambda, mu, rho, gamma) > 1.0;
}

}  // namespace spikecount::baselines
