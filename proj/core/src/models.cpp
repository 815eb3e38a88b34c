#include "spikecount/models.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "spikecount/common.hpp"

namespace spikecount::models {

namespace {

// Separate substreams so the noise is identical whether or not spikes are
// drawn; a zero-signal alternative then coincides with the null bitwise.
constexpr std::uint64_t kSpikeStream = 0x5350494bULL;  // "SPIK"
constexpr std::uint64_t kNoiseStream = 0x4e4f4953ULL;  // "NOIS"
constexpr std::uint64_t kFactorStream = 0x46414354ULL; // "FACT"

Eigen::MatrixXd sym_noise(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd W(n, n);
    const double rt2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        W(i, i) = rt2 * normal(gen);
        for (int j = i + 1; j < n; ++j) {
            const double g = normal(gen);
            W(i, j) = g;
            W(j, i) = g;
        }
    }
    return W;
}

Eigen::MatrixXd iid_noise(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd W(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) W(i, j) = normal(gen);
    }
    return W;
}

Eigen::VectorXd gaussian_vector(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(gen);
    return v;
}

prior::SpikePair resolve_spikes(const ModelParams& params, const prior::PriorSpec& spec,
                                std::uint64_t seed, const SamplerHooks* hooks) {
    if (hooks && hooks->spikes) {
        if (hooks->spikes->n != params.n) throw ParamError("hook spikes have wrong dimension");
        return *hooks->spikes;
    }
    return prior::sample_spikes(spec, params.n, mix_seed(seed, kSpikeStream));
}

}  // namespace

void ModelParams::validate(bool wishart) const {
    if (lambda < 0 || mu < 0) throw ParamError("lambda and mu must be nonnegative");
    if (rho < 0 || rho > 1) throw ParamError("rho must lie in [0, 1]");
    if (n < 2) throw ParamError("n must be at least 2");
    if (wishart && N < 2) throw ParamError("N must be at least 2");
}

WignerPair sample_wigner_pair(const ModelParams& params, const prior::PriorSpec& spec,
                              std::uint64_t seed, const SamplerHooks* hooks) {
    params.validate(false);
    const int n = params.n;
    const prior::SpikePair sp = resolve_spikes(params, spec, seed, hooks);

    WignerPair out;
    if (hooks && hooks->zero_noise) {
        out.X = Eigen::MatrixXd::Zero(n, n);
        out.Y = Eigen::MatrixXd::Zero(n, n);
    } else {
        out.X = sym_noise(n, mix_seed(seed, kNoiseStream, 0));
        out.Y = sym_noise(n, mix_seed(seed, kNoiseStream, 1));
    }
    const double sn = std::sqrt(static_cast<double>(n));
    out.X.noalias() += (params.lambda / sn) * sp.x * sp.x.transpose();
    out.Y.noalias() += (params.mu / sn) * sp.y * sp.y.transpose();
    out.spikes = sp;
    return out;
}

WishartPair sample_wishart_pair(const ModelParams& params, const prior::PriorSpec& spec,
                                std::uint64_t seed, const SamplerHooks* hooks) {
    params.validate(true);
    const int n = params.n, N = params.N;
    const prior::SpikePair sp = resolve_spikes(params, spec, seed, hooks);

    WishartPair out;
    out.u = gaussian_vector(N, mix_seed(seed, kFactorStream, 0));
    out.v = gaussian_vector(N, mix_seed(seed, kFactorStream, 1));
    if (hooks && hooks->zero_noise) {
        out.X = Eigen::MatrixXd::Zero(n, N);
        out.Y = Eigen::MatrixXd::Zero(n, N);
    } else {
        out.X = iid_noise(n, N, mix_seed(seed, kNoiseStream, 0));
        out.Y = iid_noise(n, N, mix_seed(seed, kNoiseStream, 1));
    }
    const double sn = std::sqrt(static_cast<double>(n));
    out.X.noalias() += (std::sqrt(params.lambda) / sn) * sp.x * out.u->transpose();
    out.Y.noalias() += (std::sqrt(params.mu) / sn) * sp.y * out.v->transpose();
    out.spikes = sp;
    return out;
}

WignerPair sample_modified_wigner_pair(const ModelParams& params, const prior::PriorSpec& spec,
                                       std::uint64_t seed, const SamplerHooks* hooks) {
    params.validate(false);
    const int n = params.n;
    const prior::SpikePair sp = resolve_spikes(params, spec, seed, hooks);

    WignerPair out;
    if (hooks && hooks->zero_noise) {
        out.X = Eigen::MatrixXd::Zero(n, n);
        out.Y = Eigen::MatrixXd::Zero(n, n);
    } else {
        out.X = iid_noise(n, n, mix_seed(seed, kNoiseStream, 0));
        out.Y = iid_noise(n, n, mix_seed(seed, kNoiseStream, 1));
    }
    const double s2n = std::sqrt(2.0 * n);
    out.X.noalias() += (params.lambda / s2n) * sp.x * sp.x.transpose();
    out.Y.noalias() += (params.mu / s2n) * sp.y * sp.y.transpose();
    out.spikes = sp;
    return out;
}

WignerPair sample_null_wigner(int n, std::uint64_t seed) {
    if (n < 2) throw ParamError("n must be at least 2");
    WignerPair out;
    out.X = sym_noise(n, mix_seed(seed, kNoiseStream, 0));
    out.Y = sym_noise(n, mix_seed(seed, kNoiseStream, 1));
    return out;
}

WishartPair sample_null_wishart(int n, int N, std::uint64_t seed) {
    if (n < 2 || N < 2) throw ParamError("n and N must be at least 2");
    WishartPair out;
    out.X = iid_noise(n, N, mix_seed(seed, kNoiseStream, 0));
    out.Y = iid_noise(n, N, mix_seed(seed, kNoiseStream, 1));
    return out;
}

namespace {

constexpr char kMagic[4] = {'S', 'P', 'K', '1'};

void write_matrix(std::ostream& os, const Eigen::MatrixXd& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            const double v = M(i, j);
            os.write(reinterpret_cast<const char*>(&v), sizeof(double));
        }
    }
}

void read_matrix(std::istream& is, Eigen::MatrixXd& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            double v;
            is.read(reinterpret_cast<char*>(&v), sizeof(double));
            M(i, j) = v;
        }
    }
}

}  // namespace

void dump_pair(std::ostream& os, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
        throw ParamError("dump_pair requires matrices of equal shape");
    }
    os.write(kMagic, 4);
    const std::uint32_t dtype = 8;  // f64
    const std::uint32_t rows = static_cast<std::uint32_t>(X.rows());
    const std::uint32_t cols = static_cast<std::uint32_t>(X.cols());
    os.write(reinterpret_cast<const char*>(&rows), 4);
    os.write(reinterpret_cast<const char*>(&cols), 4);
    os.write(reinterpret_cast<const char*>(&dtype), 4);
    write_matrix(os, X);
    write_matrix(os, Y);
}

void load_pair(std::istream& is, Eigen::MatrixXd& X, Eigen::MatrixXd& Y) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw NumericError("bad matrix dump magic");
    std::uint32_t rows, cols, dtype;
    is.read(reinterpret_cast<char*>(&rows), 4);
    is.read(reinterpret_cast<char*>(&cols), 4);
    is.read(reinterpret_cast<char*>(&dtype), 4);
    if (!is || dtype != 8) throw NumericError("unsupported matrix dump dtype");
    X.resize(rows, cols);
    Y.resize(rows, cols);
    read_matrix(is, X);
    read_matrix(is, Y);
    if (!is) throw NumericError("truncated matrix dump");
}

void dump_pair_file(const std::string& path, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    dump_pair(f, X, Y);
}

void load_pair_file(const std::string& path, Eigen::MatrixXd& X, Eigen::MatrixXd& Y) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path);
    load_pair(f, X, Y);
}

}  // namespace spikecount::models
