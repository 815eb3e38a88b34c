#include "spikecount/detection.hpp"

#include <algorithm>
#include <cmath>

#include "spikecount/common.hpp"

namespace spikecount::detection {

using graphfam::FamilyTag;

namespace {
constexpr std::uint64_t kColoringStream = 0xC0102ULL;
}

void DetectConfig::validate() const {
    if (!(c > 0.0 && c < 1.0)) throw ParamError("DetectConfig: c must lie in (0, 1)");
    if (t < 0) throw ParamError("DetectConfig: t must be nonnegative");
    if (ell < 1) throw ParamError("DetectConfig: ell must be positive");
    if (!(quantile > 0.0 && quantile < 1.0)) throw ParamError("DetectConfig: bad quantile");
}

int default_colorings(int family_size) {
    const double r = counting::colorful_probability(family_size, family_size);
    const double t = std::ceil(1.0 / r);
    return static_cast<int>(std::min(t, 500.0));
}

StatisticReport detect_stat_wigner(const models::WignerPair& pair, double lambda, double mu,
                                   double rho, const DetectConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(pair.X.rows());
    const int ell = cfg.ell;
    if (n < ell) throw ParamError("detect_stat_wigner requires n >= ell");

    const double r = counting::colorful_probability(ell, ell);
    const int t = cfg.t > 0 ? cfg.t : default_colorings(ell);
    const double beta = graphfam::beta(FamilyTag::H, ell, lambda, mu, rho);
    const double norm = std::sqrt(std::pow(static_cast<double>(n), ell) * beta);

    StatisticReport rep;
    rep.normalizer = beta;
    rep.mean_P_analytic = std::sqrt(beta);

    if (cfg.per_class) {
        graphfam::FamilyTable fam = graphfam::enumerate_family(FamilyTag::H, ell);
        fam.attach_weights(lambda, mu, rho);
        std::vector<std::vector<double>> sums(t,
                                              std::vector<double>(fam.classes.size(), 0.0));
        parallel_for(cfg.pool, t, [&](std::size_t k) {
            const counting::Coloring col =
                counting::random_coloring(n, ell, mix_seed(cfg.seed, kColoringStream, k));
            for (std::size_t ci = 0; ci < fam.classes.size(); ++ci) {
                sums[k][ci] = counting::dp_cycle_sum(pair.X, pair.Y, fam.classes[ci], col);
            }
        });
        rep.per_class.resize(fam.classes.size());
        double value = 0.0;
        for (std::size_t ci = 0; ci < fam.classes.size(); ++ci) {
            double raw = 0.0;
            for (int k = 0; k < t; ++k) raw += sums[k][ci];
            raw /= t * r;
            rep.per_class[ci] = {fam.classes[ci], raw, fam.weights[ci]};
            value += fam.weights[ci] * raw;
        }
        rep.value = value / norm;
        return rep;
    }

    std::vector<double> per_coloring(t, 0.0);
    parallel_for(cfg.pool, t, [&](std::size_t k) {
        const counting::Coloring col =
            counting::random_coloring(n, ell, mix_seed(cfg.seed, kColoringStream, k));
        per_coloring[k] = counting::weighted_cycle_sum(pair.X, pair.Y, lambda, mu, rho, ell, col);
    });
    double acc = 0.0;
    for (int k = 0; k < t; ++k) acc += per_coloring[k];
    rep.value = acc / (t * r) / norm;
    return rep;
}

StatisticReport detect_stat_wishart(const models::WishartPair& pair, double lambda, double mu,
                                    double rho, const DetectConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(pair.X.rows());
    const int N = static_cast<int>(pair.X.cols());
    const int ell = cfg.ell;
    if (n < ell || N < ell) throw ParamError("detect_stat_wishart requires n, N >= ell");

    const int palette = 2 * ell;
    const double r = counting::colorful_probability(palette, palette);
    const int t = cfg.t > 0 ? cfg.t : default_colorings(palette);
    const double beta = graphfam::beta(FamilyTag::G, ell, lambda, mu, rho);
    const double norm =
        std::sqrt(std::pow(static_cast<double>(n), ell) * std::pow(static_cast<double>(N), ell) *
                  beta);
    const double gamma = static_cast<double>(n) / N;

    graphfam::FamilyTable fam = graphfam::enumerate_family(FamilyTag::G, ell);
    fam.attach_weights(lambda, mu, rho);

    StatisticReport rep;
    rep.normalizer = beta;
    rep.mean_P_analytic = std::sqrt(std::pow(gamma, -ell) * beta);

    std::vector<std::vector<double>> sums(t, std::vector<double>(fam.classes.size(), 0.0));
    parallel_for(cfg.pool, t, [&](std::size_t k) {
        const counting::Coloring col = counting::random_bipartite_coloring(
            n, N, palette, mix_seed(cfg.seed, kColoringStream, k));
        for (std::size_t ci = 0; ci < fam.classes.size(); ++ci) {
            sums[k][ci] = counting::dp_bipartite_cycle_sum(pair.X, pair.Y, fam.classes[ci], col);
        }
    });

    rep.per_class.resize(fam.classes.size());
    double value = 0.0;
    for (std::size_t ci = 0; ci < fam.classes.size(); ++ci) {
        double raw = 0.0;
        for (int k = 0; k < t; ++k) raw += sums[k][ci];
        raw /= t * r;
        rep.per_class[ci] = {fam.classes[ci], raw, fam.weights[ci]};
        value += fam.weights[ci] * raw;
    }
    rep.value = value / norm;
    return rep;
}

bool decide(StatisticReport& report, const DetectConfig& cfg,
            const std::vector<double>* null_calibration) {
    double tau;
    if (cfg.threshold_mode == ThresholdMode::Analytic) {
        tau = cfg.c * report.mean_P_analytic;
    } else {
        if (null_calibration == nullptr || null_calibration->empty()) {
            throw ParamError("decide: EmpiricalNull mode needs calibration samples");
        }
        std::vector<double> sorted = *null_calibration;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t m = sorted.size();
        const std::size_t idx = std::min(
            m - 1, static_cast<std::size_t>(std::max(0.0, std::ceil(cfg.quantile * m) - 1.0)));
        tau = sorted[idx];
    }
    report.decision = report.value >= tau;
    return *report.decision;
}

}  // namespace spikecount::detection
