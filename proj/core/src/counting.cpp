#include "spikecount/counting.hpp"

#include <cmath>
#include <random>

#include "spikecount/common.hpp"

namespace spikecount::counting {

using graphfam::DecoratedClass;
using graphfam::DecorationWord;
using graphfam::FamilyTag;

namespace {

constexpr int kMaxPalette = 22;

std::vector<std::vector<int>> color_members(const Coloring& col, int from, int count) {
    std::vector<std::vector<int>> members(col.k);
    for (int v = 0; v < count; ++v) members[col.assignment[from + v]].push_back(v);
    return members;
}

DecorationWord reversed(const DecorationWord& w) {
    DecorationWord r = w;
    r.bits = 0;
    for (int i = 0; i < w.len; ++i) {
        if (w.bullet(i)) r.bits |= 1u << (w.len - 1 - i);
    }
    return r;
}

void check_palette(const Coloring& col, int expected, const char* what) {
    if (col.k != expected) {
        throw ParamError(std::string(what) + ": palette size must equal motif vertex count");
    }
    if (col.k > kMaxPalette) throw ParamError("palette too large for subset DP");
}

// Endpoint-pinned colorful walk sums along a fixed decorated path word,
// from one pivot to every vertex. State: (used-color set, current vertex).
Eigen::VectorXd path_walk_row(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                              const DecorationWord& w, const Coloring& col, int pivot) {
    const int n = static_cast<int>(X.rows());
    const int p = col.k;
    const auto members = color_members(col, 0, n);

    const std::uint32_t nmask = 1u << p;
    std::vector<Eigen::VectorXd> cur(nmask), nxt(nmask);
    std::vector<std::uint32_t> live;
    const std::uint32_t mask0 = 1u << col.color(pivot);
    cur[mask0] = Eigen::VectorXd::Zero(n);
    cur[mask0][pivot] = 1.0;
    live.push_back(mask0);

    for (int step = 0; step < w.len; ++step) {
        const Eigen::MatrixXd& M = w.bullet(step) ? X : Y;
        std::vector<std::uint32_t> next_live;
        for (std::uint32_t mask : live) {
            const Eigen::VectorXd tmp = M.transpose() * cur[mask];
            for (int c = 0; c < p; ++c) {
                if (mask & (1u << c)) continue;
                const std::uint32_t m2 = mask | (1u << c);
                if (nxt[m2].size() == 0) {
                    nxt[m2] = Eigen::VectorXd::Zero(n);
                    next_live.push_back(m2);
                }
                for (int v : members[c]) nxt[m2][v] += tmp[v];
            }
            cur[mask].resize(0);
        }
        live.swap(next_live);
        cur.swap(nxt);
    }

    const std::uint32_t full = nmask - 1;
    if (cur[full].size() == 0) return Eigen::VectorXd::Zero(n);
    return cur[full];
}

// Bipartite analogue: each step hops pivot-side -> [N]-side -> pivot-side
// consuming one color on each side.
Eigen::VectorXd bip_path_walk_row(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                  const DecorationWord& w, const Coloring& col, int pivot) {
    const int n = static_cast<int>(X.rows());
    const int N = static_cast<int>(X.cols());
    const int p = col.k;
    const auto members_b = color_members(col, n, N);

    const std::uint32_t nmask = 1u << p;
    std::vector<Eigen::VectorXd> cur(nmask), nxt(nmask);
    std::vector<std::uint32_t> live;
    const std::uint32_t mask0 = 1u << col.color(pivot);
    cur[mask0] = Eigen::VectorXd::Zero(n);
    cur[mask0][pivot] = 1.0;
    live.push_back(mask0);

    for (int step = 0; step < w.len; ++step) {
        const Eigen::MatrixXd& M = w.bullet(step) ? X : Y;
        std::vector<std::uint32_t> next_live;
        for (std::uint32_t mask : live) {
            const Eigen::VectorXd tmpb = M.transpose() * cur[mask];
            for (int cb = 0; cb < p; ++cb) {
                if (mask & (1u << cb)) continue;
                Eigen::VectorXd back = Eigen::VectorXd::Zero(n);
                for (int u : members_b[cb]) back += tmpb[u] * M.col(u);
                const std::uint32_t mb = mask | (1u << cb);
                for (int ca = 0; ca < p; ++ca) {
                    if (mb & (1u << ca)) continue;
                    const std::uint32_t m2 = mb | (1u << ca);
                    if (nxt[m2].size() == 0) {
                        nxt[m2] = Eigen::VectorXd::Zero(n);
                        next_live.push_back(m2);
                    }
                    for (int v = 0; v < n; ++v) {
                        if (col.color(v) == ca) nxt[m2][v] += back[v];
                    }
                }
            }
            cur[mask].resize(0);
        }
        live.swap(next_live);
        cur.swap(nxt);
    }

    const std::uint32_t full = nmask - 1;
    if (cur[full].size() == 0) return Eigen::VectorXd::Zero(n);
    return cur[full];
}

}  // namespace

Coloring random_coloring(int n_vertices, int k, std::uint64_t seed) {
    if (k < 1) throw ParamError("random_coloring requires k >= 1");
    Coloring c;
    c.k = k;
    c.assignment.resize(n_vertices);
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> d(0, k - 1);
    for (int i = 0; i < n_vertices; ++i) c.assignment[i] = d(gen);
    return c;
}

Coloring random_bipartite_coloring(int n, int N, int k, std::uint64_t seed) {
    Coloring c = random_coloring(n + N, k, seed);
    c.n_a = n;
    return c;
}

double colorful_probability(int family_size, int palette) {
    if (palette != family_size) {
        throw ParamError("colorful_probability: palette must equal motif vertex count");
    }
    if (family_size < 1) throw ParamError("colorful_probability: need at least one vertex");
    // m!/m^m in log space; fine up to m ~ 30.
    const double m = family_size;
    return std::exp(std::lgamma(m + 1.0) - m * std::log(m));
}

double dp_path_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                   const DecoratedClass& cls, const Coloring& col, int u, int v) {
    if (u == v) throw ParamError("dp_path_sum requires distinct endpoints");
    const DecorationWord& w = cls.canonical_word;
    check_palette(col, w.len + 1, "dp_path_sum");
    const Eigen::VectorXd fwd = path_walk_row(X, Y, w, col, u);
    const DecorationWord rw = reversed(w);
    if (rw.bits == w.bits) return fwd[v];  // palindromic word, aut = 2
    const Eigen::VectorXd bwd = path_walk_row(X, Y, rw, col, u);
    return (fwd[v] + bwd[v]) / cls.aut;
}

Eigen::VectorXd dp_path_row(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                            const DecoratedClass& cls, const Coloring& col, int pivot) {
    const DecorationWord& w = cls.canonical_word;
    check_palette(col, w.len + 1, "dp_path_row");
    Eigen::VectorXd row = path_walk_row(X, Y, w, col, pivot);
    const DecorationWord rw = reversed(w);
    if (rw.bits != w.bits) {
        row += path_walk_row(X, Y, rw, col, pivot);
        row /= cls.aut;
    }
    row[pivot] = 0.0;
    return row;
}

double dp_bipartite_path_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                             const DecoratedClass& cls, const Coloring& col, int u, int v) {
    if (u == v) throw ParamError("dp_bipartite_path_sum requires distinct endpoints");
    const DecorationWord& w = cls.canonical_word;
    check_palette(col, 2 * w.len + 1, "dp_bipartite_path_sum");
    const Eigen::VectorXd fwd = bip_path_walk_row(X, Y, w, col, u);
    const DecorationWord rw = reversed(w);
    if (rw.bits == w.bits) return fwd[v];
    const Eigen::VectorXd bwd = bip_path_walk_row(X, Y, rw, col, u);
    return (fwd[v] + bwd[v]) / cls.aut;
}

Eigen::VectorXd dp_bipartite_path_row(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                      const DecoratedClass& cls, const Coloring& col, int pivot) {
    const DecorationWord& w = cls.canonical_word;
    check_palette(col, 2 * w.len + 1, "dp_bipartite_path_row");
    Eigen::VectorXd row = bip_path_walk_row(X, Y, w, col, pivot);
    const DecorationWord rw = reversed(w);
    if (rw.bits != w.bits) {
        row += bip_path_walk_row(X, Y, rw, col, pivot);
        row /= cls.aut;
    }
    row[pivot] = 0.0;
    return row;
}

namespace {

struct BruteContext {
    const Eigen::MatrixXd* X;
    const Eigen::MatrixXd* Y;
    const DecorationWord* word;
    const Coloring* col;
    bool cycle;
    bool bipartite;
    int n;
    int N;
    std::optional<std::pair<int, int>> endpoints;

    std::vector<int> seq_a;  // chosen [n]-side vertices
    std::vector<int> seq_b;  // chosen [N]-side vertices (bipartite)
    std::uint32_t used_colors = 0;
    double total = 0.0;

    const Eigen::MatrixXd& mat(int step) const { return word->bullet(step) ? *X : *Y; }

    bool color_ok(int vertex, bool b_side) {
        if (!col) return true;
        const int c = b_side ? col->color_b(vertex) : col->color(vertex);
        return !(used_colors & (1u << c));
    }
    void push_color(int vertex, bool b_side) {
        if (!col) return;
        const int c = b_side ? col->color_b(vertex) : col->color(vertex);
        used_colors |= 1u << c;
    }
    void pop_color(int vertex, bool b_side) {
        if (!col) return;
        const int c = b_side ? col->color_b(vertex) : col->color(vertex);
        used_colors &= ~(1u << c);
    }
};

bool contains(const std::vector<int>& v, int x) {
    for (int e : v) {
        if (e == x) return true;
    }
    return false;
}

// Unipartite sequences z_1..z_m (m = len for cycles, len + 1 for paths).
void brute_recurse(BruteContext& ctx, int depth, double weight) {
    const int len = ctx.word->len;
    const int m = ctx.cycle ? len : len + 1;
    if (depth == m) {
        double w = weight;
        if (ctx.cycle) {
            w *= ctx.mat(len - 1)(ctx.seq_a[m - 1], ctx.seq_a[0]);
        }
        ctx.total += w;
        return;
    }
    const bool last = depth == m - 1;
    for (int z = 0; z < ctx.n; ++z) {
        if (contains(ctx.seq_a, z)) continue;
        if (!ctx.color_ok(z, false)) continue;
        if (!ctx.cycle && ctx.endpoints) {
            if (depth == 0 && z != ctx.endpoints->first && z != ctx.endpoints->second) continue;
            if (last) {
                const int other =
                    ctx.seq_a[0] == ctx.endpoints->first ? ctx.endpoints->second : ctx.endpoints->first;
                if (z != other) continue;
            }
        }
        double w = weight;
        if (depth > 0) w *= ctx.mat(depth - 1)(ctx.seq_a[depth - 1], z);
        if (w == 0.0 && depth > 0) continue;
        ctx.seq_a.push_back(z);
        ctx.push_color(z, false);
        brute_recurse(ctx, depth + 1, w);
        ctx.pop_color(z, false);
        ctx.seq_a.pop_back();
    }
}

// Bipartite sequences v_1, u_1, v_2, ..., alternating sides. `slot` counts
// placed vertices; even slots are [n]-side.
void brute_recurse_bip(BruteContext& ctx, int slot, double weight) {
    const int len = ctx.word->len;
    const int n_a = ctx.cycle ? len : len + 1;
    const int n_b = len;
    const int total_slots = n_a + n_b;
    if (slot == total_slots) {
        double w = weight;
        if (ctx.cycle) {
            // closing pair: (v_ell, u_ell) and (v_1, u_ell)
            const int ul = ctx.seq_b[len - 1];
            w *= ctx.mat(len - 1)(ctx.seq_a[len - 1], ul) * ctx.mat(len - 1)(ctx.seq_a[0], ul);
        }
        ctx.total += w;
        return;
    }
    const bool b_side = slot % 2 == 1;
    if (b_side) {
        const int i = slot / 2;  // u_{i+1} with pair decoration word[i]
        for (int u = 0; u < ctx.N; ++u) {
            if (contains(ctx.seq_b, u)) continue;
            if (!ctx.color_ok(u, true)) continue;
            // For cycles the closing pair is handled at the leaf; skip its
            // b-vertex edge weights here when i == len - 1.
            double w = weight;
            if (!(ctx.cycle && i == len - 1)) w *= ctx.mat(i)(ctx.seq_a[i], u);
            if (ctx.cycle && i == len - 1) {
                // weight applied at leaf
            }
            if (w == 0.0) continue;
            ctx.seq_b.push_back(u);
            ctx.push_color(u, true);
            brute_recurse_bip(ctx, slot + 1, w);
            ctx.pop_color(u, true);
            ctx.seq_b.pop_back();
        }
    } else {
        const int i = slot / 2;  // v_{i+1}
        const bool last = !ctx.cycle && slot == total_slots - 1;
        for (int z = 0; z < ctx.n; ++z) {
            if (contains(ctx.seq_a, z)) continue;
            if (!ctx.color_ok(z, false)) continue;
            if (!ctx.cycle && ctx.endpoints) {
                if (slot == 0 && z != ctx.endpoints->first && z != ctx.endpoints->second) continue;
                if (last) {
                    const int other = ctx.seq_a[0] == ctx.endpoints->first ? ctx.endpoints->second
                                                                           : ctx.endpoints->first;
                    if (z != other) continue;
                }
            }
            double w = weight;
            if (i > 0) w *= ctx.mat(i - 1)(z, ctx.seq_b[i - 1]);
            if (w == 0.0 && i > 0) continue;
            ctx.seq_a.push_back(z);
            ctx.push_color(z, false);
            brute_recurse_bip(ctx, slot + 1, w);
            ctx.pop_color(z, false);
            ctx.seq_a.pop_back();
        }
    }
}

}  // namespace

double brute_force_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                       const DecoratedClass& cls, const Coloring* col,
                       std::optional<std::pair<int, int>> endpoints) {
    if (cls.tag == FamilyTag::Istarstar && cls.odd_path) {
        throw ParamError("brute_force_sum: odd Istarstar classes not supported");
    }
    const bool bipartite = cls.tag == FamilyTag::G || cls.tag == FamilyTag::I ||
                           cls.tag == FamilyTag::Istar || cls.tag == FamilyTag::Istarstar;
    const bool cycle = cls.canonical_word.topology == graphfam::Topology::Cycle;

    BruteContext ctx;
    ctx.X = &X;
    ctx.Y = &Y;
    ctx.word = &cls.canonical_word;
    ctx.col = col;
    ctx.cycle = cycle;
    ctx.bipartite = bipartite;
    ctx.n = static_cast<int>(X.rows());
    ctx.N = static_cast<int>(X.cols());
    ctx.endpoints = endpoints;

    const int verts = cls.n_vertices();
    const double states = bipartite
                              ? std::pow(ctx.n, cycle ? cls.canonical_word.len
                                                      : cls.canonical_word.len + 1) *
                                    std::pow(ctx.N, cls.canonical_word.len)
                              : std::pow(ctx.n, verts);
    if (states > 1e8) throw ParamError("brute_force_sum: instance too large");

    if (bipartite) {
        brute_recurse_bip(ctx, 0, 1.0);
    } else {
        brute_recurse(ctx, 0, 1.0);
    }
    return ctx.total / cls.aut;
}

}  // namespace spikecount::counting
