#pragma once

#include <optional>
#include <vector>

#include "spikecount/counting.hpp"
#include "spikecount/models.hpp"
#include "spikecount/threadpool.hpp"

namespace spikecount::detection {

enum class ThresholdMode { Analytic, EmpiricalNull };

struct DetectConfig {
    int ell = 5;  // Wishart experiments default to 3
    int t = 0;    // colorings; 0 picks min(ceil(1/r), 500)
    double c = 0.5;
    ThresholdMode threshold_mode = ThresholdMode::EmpiricalNull;
    double quantile = 0.99;
    std::uint64_t seed = 1;
    bool per_class = false;  // fill the per-class breakdown (class-by-class DP)
    ThreadPool* pool = nullptr;

    void validate() const;
};

struct PerClassEntry {
    graphfam::DecoratedClass cls;
    double raw_sum = 0.0;  // (1/(t r)) sum over colorings of the colorful DP
    double weight = 0.0;
};

struct StatisticReport {
    double value = 0.0;
    double normalizer = 0.0;        // beta of the family
    double mean_P_analytic = 0.0;   // sqrt(beta_H) resp. sqrt(gamma^-ell beta_G)
    std::vector<PerClassEntry> per_class;
    std::optional<bool> decision;
};

int default_colorings(int family_size);

StatisticReport detect_stat_wigner(const models::WignerPair& pair, double lambda, double mu,
                                   double rho, const DetectConfig& cfg);
StatisticReport detect_stat_wishart(const models::WishartPair& pair, double lambda, double mu,
                                    double rho, const DetectConfig& cfg);

// Thresholds the statistic; EmpiricalNull mode takes the tau from the
// given calibration sample's quantile.
bool decide(StatisticReport& report, const DetectConfig& cfg,
            const std::vector<double>* null_calibration = nullptr);

}  // namespace spikecount::detection
