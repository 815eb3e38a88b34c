#pragma once

#include <cstdint>
#include <vector>

#include "spikecount/prior.hpp"
#include "spikecount/threadpool.hpp"

namespace spikecount::lowdeg {

struct AdvEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int D = 0;
    int reps = 0;
    int n = 0;
};

// Truncated exponential sum_{k<=D} x^k / k!, stable forward recurrence.
double exp_trunc(double x, int D);

// Monte Carlo bound on the degree-D advantage for the modified Wigner
// pair: E[exp_{<=D}((lambda^2 <x,x'>^2 + mu^2 <y,y'>^2) / (2n))] over
// independent replica pairs. Pass a Squared-mode prior to match the
// lower-bound convention E[XY] = rho^2.
AdvEstimate adv_wigner_mc(const prior::PriorSpec& spec, double lambda, double mu, int n, int D,
                          int reps, std::uint64_t seed, ThreadPool* pool = nullptr);

// Coefficients c_k of phi_D(t) = sum_k c_k t^k with
// c_k = sum_{k_1+...+k_N=k} prod binom(2 k_i, k_i), held in log space.
struct PhiCoefficients {
    int N = 0;
    int D = 0;
    std::vector<double> log_c;

    double log_coeff(int k) const { return log_c[k]; }
    double coeff(int k) const;
};

// Fast path via the generating function (1-4z)^{-N/2}:
// c_k = prod_{i<k} (2N + 4i) / k!.
PhiCoefficients phi_coefficients(int N, int D);

// Exact convolution oracle over (sum_j binom(2j,j) z^j)^N for small N, D.
std::vector<double> phi_coefficients_dp(int N, int D);

// log phi_D(t) for t >= 0 via log-sum-exp (all terms positive).
double phi_eval_log(const PhiCoefficients& phi, double t);

// Monte Carlo bound for the Wishart pair:
// E[phi_D(lambda^2 <x,x'>^2 / 4n^2) phi_D(mu^2 <y,y'>^2 / 4n^2)].
AdvEstimate adv_wishart_mc(const prior::PriorSpec& spec, double lambda, double mu, int n, int N,
                           int D, int reps, std::uint64_t seed, ThreadPool* pool = nullptr);

}  // namespace spikecount::lowdeg
