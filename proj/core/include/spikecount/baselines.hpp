#pragma once

#include <utility>

#include <Eigen/Core>

#include "spikecount/common.hpp"

namespace spikecount::baselines {

struct SpectralResult {
    double top_value = 0.0;
    Eigen::VectorXd top_vector;
    int iterations = 0;
    double residual = 0.0;
};

// Thrown on non-convergence; carries the best iterate found.
struct ConvergenceError : NumericError {
    ConvergenceError(const std::string& msg, SpectralResult best_)
        : NumericError(msg), best(std::move(best_)) {}
    SpectralResult best;
};

// Largest eigenvalue of a symmetric matrix by shifted power iteration,
// with ||A v - theta v|| <= tol ||v|| on success.
SpectralResult top_eigpair_sym(const Eigen::MatrixXd& A, double tol = 1e-10,
                               int max_iter = 10000, std::uint64_t seed = 1);

// Predicted top-eigenvalue locations at the BBP transition.
double bbp_wigner_predict(double lambda);
struct BbpWishart {
    double bulk_edge = 0.0;
    double spike_location = 0.0;
};
BbpWishart bbp_wishart_predict(double lambda, double gamma);

// Top singular value/vector of the cross-covariance S = X Y^T.
SpectralResult pls_stat(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// Largest real root of 1 + aX + bX^2 + cX^3 built from (lambda, mu, rho);
// +infinity when no real root lies in [0, 1e3]. PLS succeeds iff tau <= gamma.
double pls_threshold(double lambda, double mu, double rho);

// Top singular value of the MANOVA matrix (XX^T)^{-1/2} (YX^T) (YY^T)^{-1/2}.
SpectralResult cca_stat(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// lambda^2 mu^2 rho^2 (1/gamma - 1) / ((lambda^2+1)(mu^2+1)) > 1
bool cca_condition(double lambda, double mu, double rho, double gamma);
double cca_condition_value(double lambda, double mu, double rho, double gamma);

}  // namespace spikecount::baselines
