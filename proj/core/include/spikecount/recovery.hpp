#pragma once

#include <Eigen/Core>

#include "spikecount/counting.hpp"
#include "spikecount/models.hpp"
#include "spikecount/threadpool.hpp"

namespace spikecount::recovery {

enum class PivotMode { FixedIndex, MaxRowEnergy };

struct RecoverConfig {
    int ell = 4;  // Wishart experiments default to 3
    int t = 0;    // colorings; 0 picks min(ceil(1/kappa), 500)
    double R = 3.0;
    PivotMode pivot_mode = PivotMode::FixedIndex;
    int pivot = 0;
    std::uint64_t seed = 1;
    ThreadPool* pool = nullptr;

    void validate() const;
};

struct ScoreRow {
    int pivot = 0;
    Eigen::VectorXd scores;
    double normalizer = 0.0;  // the word-sum normalizer actually applied
};

// Pivot-row similarity scores. The normalizer is the decoration-word sum
// over the family (twice the class sum beta), which makes the score an
// asymptotically unbiased estimate of x_w x_v.
ScoreRow recovery_scores_wigner(const models::WignerPair& pair, double lambda, double mu,
                                double rho, const RecoverConfig& cfg, int pivot);
ScoreRow recovery_scores_wishart(const models::WishartPair& pair, double lambda, double mu,
                                 double rho, const RecoverConfig& cfg, int pivot);

// Resolves the pivot per cfg.pivot_mode. MaxRowEnergy scans full rows for
// every pivot; intended for small instances.
int select_pivot_wigner(const models::WignerPair& pair, double lambda, double mu, double rho,
                        const RecoverConfig& cfg);
int select_pivot_wishart(const models::WishartPair& pair, double lambda, double mu, double rho,
                         const RecoverConfig& cfg);

// Entrywise truncation at R^4 (oversized scores zeroed).
Eigen::VectorXd assemble_estimate(const ScoreRow& row, const RecoverConfig& cfg);

// |<a, b>| / (||a|| ||b||); zero for zero vectors.
double overlap(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

}  // namespace spikecount::recovery
