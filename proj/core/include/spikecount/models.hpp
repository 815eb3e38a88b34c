#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "spikecount/prior.hpp"

namespace spikecount::models {

struct ModelParams {
    double lambda = 0.0;
    double mu = 0.0;
    double rho = 0.0;
    int n = 0;
    int N = 0;  // Wishart only

    double gamma() const { return static_cast<double>(n) / N; }
    void validate(bool wishart) const;
};

struct WignerPair {
    Eigen::MatrixXd X;
    Eigen::MatrixXd Y;
    std::optional<prior::SpikePair> spikes;
};

struct WishartPair {
    Eigen::MatrixXd X;
    Eigen::MatrixXd Y;
    std::optional<prior::SpikePair> spikes;
    std::optional<Eigen::VectorXd> u;
    std::optional<Eigen::VectorXd> v;
};

// Test hooks: pin the spikes (decouples spike and noise randomness) or
// zero the noise entirely.
struct SamplerHooks {
    std::optional<prior::SpikePair> spikes;
    bool zero_noise = false;
};

// X = (lambda/sqrt(n)) x x^T + W, Y = (mu/sqrt(n)) y y^T + Z with W, Z
// independent symmetric Gaussian noise (variance 1 off-diagonal, 2 on it).
WignerPair sample_wigner_pair(const ModelParams& params, const prior::PriorSpec& spec,
                              std::uint64_t seed, const SamplerHooks* hooks = nullptr);

// X = (sqrt(lambda)/sqrt(n)) x u^T + W, Y = (sqrt(mu)/sqrt(n)) y v^T + Z
// with standard Gaussian factors u, v and i.i.d. standard Gaussian noise.
WishartPair sample_wishart_pair(const ModelParams& params, const prior::PriorSpec& spec,
                                std::uint64_t seed, const SamplerHooks* hooks = nullptr);

// Asymmetric variant: X = (lambda/sqrt(2n)) x x^T + W with i.i.d. N(0,1)
// entries everywhere (no symmetry).
WignerPair sample_modified_wigner_pair(const ModelParams& params, const prior::PriorSpec& spec,
                                       std::uint64_t seed, const SamplerHooks* hooks = nullptr);

// Pure noise draws sharing the noise law (and the noise stream: equal seeds
// couple the null to a zero-signal alternative).
WignerPair sample_null_wigner(int n, std::uint64_t seed);
WishartPair sample_null_wishart(int n, int N, std::uint64_t seed);

// Binary dump of a matrix pair: magic, dims, dtype header then row-major
// little-endian doubles.
void dump_pair(std::ostream& os, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);
void load_pair(std::istream& is, Eigen::MatrixXd& X, Eigen::MatrixXd& Y);
void dump_pair_file(const std::string& path, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);
void load_pair_file(const std::string& path, Eigen::MatrixXd& X, Eigen::MatrixXd& Y);

}  // namespace spikecount::models
