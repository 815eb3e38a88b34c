#include "spikecount/prior.hpp"

#include <cmath>
#include <random>

namespace spikecount::prior {

void PriorSpec::validate() const {
    if (rho < 0.0 || rho > 1.0) throw ParamError("rho must lie in [0, 1]");
    if (kind == Kind::SparseRademacher && !(p > 0.0 && p <= 1.0)) {
        throw ParamError("SparseRademacher requires p in (0, 1]");
    }
}

SpikePair sample_spikes(const PriorSpec& spec, int n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw ParamError("sample_spikes requires n >= 1");

    const double r = spec.rho_eff();
    SpikePair out;
    out.n = n;
    out.x.resize(n);
    out.y.resize(n);

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    switch (spec.kind) {
        case Kind::CorrelatedGaussian: {
            const double s = std::sqrt(1.0 - r * r);
            for (int i = 0; i < n; ++i) {
                const double xi = normal(gen);
                const double zi = normal(gen);
                out.x[i] = xi;
                out.y[i] = r * xi + s * zi;
            }
            break;
        }
        case Kind::CorrelatedRademacher: {
            const double p_eq = 0.5 * (1.0 + r);
            for (int i = 0; i < n; ++i) {
                const double xi = unif(gen) < 0.5 ? 1.0 : -1.0;
                out.x[i] = xi;
                out.y[i] = unif(gen) < p_eq ? xi : -xi;
            }
            break;
        }
        case Kind::SparseRademacher: {
            const double p_eq = 0.5 * (1.0 + r);
            const double scale = 1.0 / std::sqrt(spec.p);
            for (int i = 0; i < n; ++i) {
                const bool gate = unif(gen) < spec.p;
                const double xi = unif(gen) < 0.5 ? 1.0 : -1.0;
                const double yi = unif(gen) < p_eq ? xi : -xi;
                out.x[i] = gate ? scale * xi : 0.0;
                out.y[i] = gate ? scale * yi : 0.0;
            }
            break;
        }
    }
    return out;
}

namespace {

double gaussian_moment(int m) {
    if (m % 2 == 1) return 0.0;
    double v = 1.0;
    for (int k = m - 1; k >= 1; k -= 2) v *= k;
    return v;
}

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
}

// E[X^a Y^b] for a pair of Rademacher signs with E[XY] = r.
double rademacher_moment(int a, int b, double r) {
    const bool ao = a % 2, bo = b % 2;
    if (ao && bo) return r;
    if (!ao && !bo) return 1.0;
    return 0.0;
}

}  // namespace

double prior_moments(const PriorSpec& spec, int a, int b) {
    spec.validate();
    if (a < 0 || b < 0 || a + b > 8) throw ParamError("unsupported moment order (need a, b >= 0 and a + b <= 8)");
    if (a == 0 && b == 0) return 1.0;

    const double r = spec.rho_eff();
    switch (spec.kind) {
        case Kind::CorrelatedGaussian: {
            // Y = r X + sqrt(1 - r^2) Z with X, Z independent standard normals.
            const double s2 = 1.0 - r * r;
            double total = 0.0;
            for (int k = 0; k <= b; ++k) {
                if ((b - k) % 2 != 0) continue;
                total += binom(b, k) * std::pow(r, k) * std::pow(s2, (b - k) / 2.0) *
                         gaussian_moment(a + k) * gaussian_moment(b - k);
            }
            return total;
        }
        case Kind::CorrelatedRademacher:
            return rademacher_moment(a, b, r);
        case Kind::SparseRademacher:
            // Shared Bernoulli gate: B^(a+b) = B for a + b >= 1.
            return spec.p * std::pow(spec.p, -0.5 * (a + b)) * rademacher_moment(a, b, r);
    }
    throw ParamError("unknown prior kind");
}

}  // namespace spikecount::prior
