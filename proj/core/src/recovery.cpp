#include "spikecount/recovery.hpp"

#include <cmath>

#include "spikecount/common.hpp"
#include "spikecount/detection.hpp"

namespace spikecount::recovery {

using graphfam::FamilyTag;

namespace {
constexpr std::uint64_t kColoringStream = 0xC0103ULL;
}

void RecoverConfig::validate() const {
    if (!(R > 0.0)) throw ParamError("RecoverConfig: R must be positive");
    if (t < 0) throw ParamError("RecoverConfig: t must be nonnegative");
    if (ell < 1) throw ParamError("RecoverConfig: ell must be positive");
}

namespace {

ScoreRow score_row(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, bool wishart,
                   double lambda, double mu, double rho, const RecoverConfig& cfg, int pivot) {
    cfg.validate();
    const int n = static_cast<int>(X.rows());
    const int N = static_cast<int>(X.cols());
    const int ell = cfg.ell;
    if (pivot < 0 || pivot >= n) throw ParamError("recovery pivot out of range");
    if (!wishart && n < ell + 2) throw ParamError("recovery requires n >= ell + 2");
    if (wishart && (n < ell + 1 || N < ell + 1)) {
        throw ParamError("recovery requires n, N >= ell + 1");
    }

    const int palette = wishart ? 2 * ell + 1 : ell + 1;
    const double kappa = counting::colorful_probability(palette, palette);
    const int t = cfg.t > 0 ? cfg.t : detection::default_colorings(palette);

    const FamilyTag tag = wishart ? FamilyTag::I : FamilyTag::J;
    graphfam::FamilyTable fam = graphfam::enumerate_family(tag, ell);
    fam.attach_weights(lambda, mu, rho);
    // word-sum normalizer: orbits have size 2/aut, so it is exactly 2 beta
    const double word_sum = 2.0 * fam.beta;

    std::vector<Eigen::VectorXd> acc(t);
    parallel_for(cfg.pool, t, [&](std::size_t k) {
        const counting::Coloring col =
            wishart ? counting::random_bipartite_coloring(n, N, palette,
                                                          mix_seed(cfg.seed, kColoringStream, k))
                    : counting::random_coloring(n, palette, mix_seed(cfg.seed, kColoringStream, k));
        Eigen::VectorXd local = Eigen::VectorXd::Zero(n);
        for (std::size_t ci = 0; ci < fam.classes.size(); ++ci) {
            const Eigen::VectorXd row =
                wishart ? counting::dp_bipartite_path_row(X, Y, fam.classes[ci], col, pivot)
                        : counting::dp_path_row(X, Y, fam.classes[ci], col, pivot);
            local += fam.weights[ci] * row;
        }
        acc[k] = std::move(local);
    });

    Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < t; ++k) total += acc[k];

    const double prefactor =
        wishart ? std::pow(static_cast<double>(N), ell) / static_cast<double>(n)
                : std::pow(static_cast<double>(n), 0.5 * ell - 1.0);

    ScoreRow out;
    out.pivot = pivot;
    out.normalizer = word_sum;
    out.scores = total / (t * kappa) / (prefactor * word_sum);
    return out;
}

}  // namespace

ScoreRow recovery_scores_wigner(const models::WignerPair& pair, double lambda, double mu,
                                double rho, const RecoverConfig& cfg, int pivot) {
    return score_row(pair.X, pair.Y, /*wishart=*/false, lambda, mu, rho, cfg, pivot);
}

ScoreRow recovery_scores_wishart(const models::WishartPair& pair, double lambda, double mu,
                                 double rho, const RecoverConfig& cfg, int pivot) {
    return score_row(pair.X, pair.Y, /*wishart=*/true, lambda, mu, rho, cfg, pivot);
}

namespace {

template <typename RowFn>
int select_pivot(int n, const RecoverConfig& cfg, RowFn&& row_at) {
    if (cfg.pivot_mode == PivotMode::FixedIndex) {
        if (cfg.pivot < 0 || cfg.pivot >= n) throw ParamError("pivot index out of range");
        return cfg.pivot;
    }
    int best = 0;
    double best_energy = -1.0;
    for (int w = 0; w < n; ++w) {
        const ScoreRow row = row_at(w);
        const double energy = row.scores.squaredNorm();
        if (energy > best_energy) {
            best_energy = energy;
            best = w;
        }
    }
    return best;
}

}  // namespace

int select_pivot_wigner(const models::WignerPair& pair, double lambda, double mu, double rho,
                        const RecoverConfig& cfg) {
    return select_pivot(static_cast<int>(pair.X.rows()), cfg, [&](int w) {
        return recovery_scores_wigner(pair, lambda, mu, rho, cfg, w);
    });
}

int select_pivot_wishart(const models::WishartPair& pair, double lambda, double mu, double rho,
                         const RecoverConfig& cfg) {
    return select_pivot(static_cast<int>(pair.X.rows()), cfg, [&](int w) {
        return recovery_scores_wishart(pair, lambda, mu, rho, cfg, w);
    });
}

Eigen::VectorXd assemble_estimate(const ScoreRow& row, const RecoverConfig& cfg) {
    const double cap = cfg.R * cfg.R * cfg.R * cfg.R;
    Eigen::VectorXd out = row.scores;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (std::abs(out[i]) > cap) out[i] = 0.0;
    }
    return out;
}

double overlap(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
    const double ne = estimate.norm();
    const double nt = truth.norm();
    if (ne == 0.0 || nt == 0.0) return 0.0;
    return std::abs(estimate.dot(truth)) / (ne * nt);
}

}  // namespace spikecount::recovery
