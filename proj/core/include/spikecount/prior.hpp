#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "spikecount/common.hpp"

namespace spikecount::prior {

enum class Kind { CorrelatedGaussian, CorrelatedRademacher, SparseRademacher };

// Whether `rho` itself or `rho^2` is the pairwise correlation E[XY].
// The Squared convention is used by the low-degree experiments.
enum class RhoMode { Linear, Squared };

struct PriorSpec {
    Kind kind = Kind::CorrelatedRademacher;
    double rho = 0.0;
    double p = 1.0;  // sparsity, SparseRademacher only
    RhoMode rho_mode = RhoMode::Linear;

    // E[XY] after applying rho_mode.
    double rho_eff() const { return rho_mode == RhoMode::Linear ? rho : rho * rho; }
    void validate() const;
};

struct SpikePair {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    int n = 0;
};

// Coordinates (x_i, y_i) drawn i.i.d. from the coupling named by `spec`:
//   Gaussian:    Y = rho_eff X + sqrt(1 - rho_eff^2) Z
//   Rademacher:  X uniform +-1, Y = X w.p. (1 + rho_eff)/2 else -X
//   Sparse:      one shared Bernoulli(p) gate per coordinate, (BX, BY)/sqrt(p)
SpikePair sample_spikes(const PriorSpec& spec, int n, std::uint64_t seed);

// Analytic E[X^a Y^b] for the canonical priors, a + b <= 8.
double prior_moments(const PriorSpec& spec, int a, int b);

}  // namespace spikecount::prior
