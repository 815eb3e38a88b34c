#include "spikecount/lowdeg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spikecount/common.hpp"

namespace spikecount::lowdeg {

double exp_trunc(double x, int D) {
    if (D < 0) throw ParamError("exp_trunc requires D >= 0");
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= D; ++k) {
        term *= x / k;
        sum += term;
    }
    return sum;
}

namespace {

constexpr std::uint64_t kReplicaStream = 0x4C4F57ULL;  // "LOW"

// Deterministic chunked Monte Carlo: per-chunk sums land in slots and are
// combined in chunk order, so the result is worker-count independent.
template <typename PerRep>
AdvEstimate mc_estimate(int n, int D, int reps, std::uint64_t seed, ThreadPool* pool,
                        PerRep&& per_rep) {
    if (reps < 1000) throw ParamError("advantage MC requires reps >= 1000");
    constexpr int kChunk = 1024;
    const int chunks = (reps + kChunk - 1) / kChunk;
    std::vector<double> sums(chunks, 0.0), sqs(chunks, 0.0);
    parallel_for(pool, chunks, [&](std::size_t ch) {
        const int lo = static_cast<int>(ch) * kChunk;
        const int hi = std::min(reps, lo + kChunk);
        double s = 0.0, s2 = 0.0;
        for (int rep = lo; rep < hi; ++rep) {
            const double v = per_rep(mix_seed(seed, kReplicaStream, rep));
            s += v;
            s2 += v * v;
        }
        sums[ch] = s;
        sqs[ch] = s2;
    });
    double s = 0.0, s2 = 0.0;
    for (int ch = 0; ch < chunks; ++ch) {
        s += sums[ch];
        s2 += sqs[ch];
    }
    AdvEstimate est;
    est.value = s / reps;
    const double var = std::max(0.0, s2 / reps - est.value * est.value);
    est.std_error = std::sqrt(var / reps);
    est.D = D;
    est.reps = reps;
    est.n = n;
    return est;
}

}  // namespace

AdvEstimate adv_wigner_mc(const prior::PriorSpec& spec, double lambda, double mu, int n, int D,
                          int reps, std::uint64_t seed, ThreadPool* pool) {
    spec.validate();
    return mc_estimate(n, D, reps, seed, pool, [&](std::uint64_t rep_seed) {
        const prior::SpikePair a = prior::sample_spikes(spec, n, mix_seed(rep_seed, 0));
        const prior::SpikePair b = prior::sample_spikes(spec, n, mix_seed(rep_seed, 1));
        const double s1 = a.x.dot(b.x);
        const double s2 = a.y.dot(b.y);
        const double arg = (lambda * lambda * s1 * s1 + mu * mu * s2 * s2) / (2.0 * n);
        return exp_trunc(arg, D);
    });
}

double PhiCoefficients::coeff(int k) const { return std::exp(log_c[k]); }

PhiCoefficients phi_coefficients(int N, int D) {
    if (N < 1) throw ParamError("phi_coefficients requires N >= 1");
    if (D < 0 || D > 30) throw ParamError("phi_coefficients requires 0 <= D <= 30");
    PhiCoefficients out;
    out.N = N;
    out.D = D;
    out.log_c.resize(D + 1);
    out.log_c[0] = 0.0;
    double acc = 0.0;
    for (int k = 1; k <= D; ++k) {
        acc += std::log(2.0 * N + 4.0 * (k - 1)) - std::log(static_cast<double>(k));
        out.log_c[k] = acc;
    }
    return out;
}

std::vector<double> phi_coefficients_dp(int N, int D) {
    if (N < 1 || N > 32 || D < 0 || D > 16) {
        throw ParamError("phi_coefficients_dp is an exact oracle for small N, D only");
    }
    std::vector<double> central(D + 1);
    for (int j = 0; j <= D; ++j) {
        double b = 1.0;  // binom(2j, j)
        for (int i = 0; i < j; ++i) b = b * (2.0 * j - i) / (i + 1);
        central[j] = b;
    }
    std::vector<double> cur(D + 1, 0.0);
    cur[0] = 1.0;
    for (int i = 0; i < N; ++i) {
        std::vector<double> nxt(D + 1, 0.0);
        for (int k = 0; k <= D; ++k) {
            for (int j = 0; j <= k; ++j) nxt[k] += cur[k - j] * central[j];
        }
        cur = std::move(nxt);
    }
    return cur;
}

double phi_eval_log(const PhiCoefficients& phi, double t) {
    if (t < 0.0) throw ParamError("phi_eval_log requires t >= 0");
    if (t == 0.0) return 0.0;
    const double lt = std::log(t);
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= phi.D; ++k) mx = std::max(mx, phi.log_c[k] + k * lt);
    double s = 0.0;
    for (int k = 0; k <= phi.D; ++k) s += std::exp(phi.log_c[k] + k * lt - mx);
    return mx + std::log(s);
}

AdvEstimate adv_wishart_mc(const prior::PriorSpec& spec, double lambda, double mu, int n, int N,
                           int D, int reps, std::uint64_t seed, ThreadPool* pool) {
    spec.validate();
    const PhiCoefficients phi = phi_coefficients(N, D);
    return mc_estimate(n, D, reps, seed, pool, [&](std::uint64_t rep_seed) {
        const prior::SpikePair a = prior::sample_spikes(spec, n, mix_seed(rep_seed, 0));
        const prior::SpikePair b = prior::sample_spikes(spec, n, mix_seed(rep_seed, 1));
        const double s1 = a.x.dot(b.x);
        const double s2 = a.y.dot(b.y);
        const double n2 = 4.0 * static_cast<double>(n) * static_cast<double>(n);
        const double t1 = lambda * lambda * s1 * s1 / n2;
        const double t2 = mu * mu * s2 * s2 / n2;
        return std::exp(phi_eval_log(phi, t1) + phi_eval_log(phi, t2));
    });
}

}  // namespace spikecount::lowdeg
