#include <algorithm>
#include <vector>

#include "spikecount/common.hpp"
#include "spikecount/counting.hpp"

// Colorful closed-walk sums for decorated cycles, organized as dense GEMMs
// over color-class blocks. States are (used-color set, current class);
// values are matrices indexed by (start vertex, current vertex).

namespace spikecount::counting {

using graphfam::DecoratedClass;
using graphfam::DecorationWord;

namespace {

constexpr int kMaxCycleBits = 12;

struct Blocks {
    // members[c] lists the vertices of color c (bipartite: per side).
    std::vector<std::vector<int>> a_members;
    std::vector<std::vector<int>> b_members;
    // XB[a*k+b], YB[a*k+b]: X/Y restricted to rows of a-class a and columns
    // of b-class b (unipartite: both sides are a-classes).
    std::vector<Eigen::MatrixXd> XB, YB;
    int k = 0;

    const Eigen::MatrixXd& block(bool bullet, int a, int b) const {
        return bullet ? XB[a * k + b] : YB[a * k + b];
    }
};

Blocks make_blocks_unipartite(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                              const Coloring& col) {
    const int n = static_cast<int>(X.rows());
    Blocks bl;
    bl.k = col.k;
    bl.a_members.assign(col.k, {});
    for (int v = 0; v < n; ++v) bl.a_members[col.color(v)].push_back(v);
    bl.XB.resize(col.k * col.k);
    bl.YB.resize(col.k * col.k);
    for (int a = 0; a < col.k; ++a) {
        for (int b = 0; b < col.k; ++b) {
            const auto& ra = bl.a_members[a];
            const auto& cb = bl.a_members[b];
            Eigen::MatrixXd mx(ra.size(), cb.size()), my(ra.size(), cb.size());
            for (std::size_t i = 0; i < ra.size(); ++i) {
                for (std::size_t j = 0; j < cb.size(); ++j) {
                    mx(i, j) = X(ra[i], cb[j]);
                    my(i, j) = Y(ra[i], cb[j]);
                }
            }
            bl.XB[a * col.k + b] = std::move(mx);
            bl.YB[a * col.k + b] = std::move(my);
        }
    }
    return bl;
}

Blocks make_blocks_bipartite(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                             const Coloring& col) {
    const int n = static_cast<int>(X.rows());
    const int N = static_cast<int>(X.cols());
    Blocks bl;
    bl.k = col.k;
    bl.a_members.assign(col.k, {});
    bl.b_members.assign(col.k, {});
    for (int v = 0; v < n; ++v) bl.a_members[col.color(v)].push_back(v);
    for (int u = 0; u < N; ++u) bl.b_members[col.color_b(u)].push_back(u);
    bl.XB.resize(col.k * col.k);
    bl.YB.resize(col.k * col.k);
    for (int a = 0; a < col.k; ++a) {
        for (int b = 0; b < col.k; ++b) {
            const auto& ra = bl.a_members[a];
            const auto& cb = bl.b_members[b];
            Eigen::MatrixXd mx(ra.size(), cb.size()), my(ra.size(), cb.size());
            for (std::size_t i = 0; i < ra.size(); ++i) {
                for (std::size_t j = 0; j < cb.size(); ++j) {
                    mx(i, j) = X(ra[i], cb[j]);
                    my(i, j) = Y(ra[i], cb[j]);
                }
            }
            bl.XB[a * col.k + b] = std::move(mx);
            bl.YB[a * col.k + b] = std::move(my);
        }
    }
    return bl;
}

// Level-indexed DP tables: slot(mask, c) -> matrix of walk sums.
struct Table {
    int k;
    std::vector<Eigen::MatrixXd> slots;
    std::vector<std::uint32_t> live;  // masks with any allocated class

    explicit Table(int k_) : k(k_), slots(std::size_t(1u << k_) * k_) {}

    Eigen::MatrixXd& at(std::uint32_t mask, int c) { return slots[std::size_t(mask) * k + c]; }
    void clear() {
        for (std::uint32_t m : live) {
            for (int c = 0; c < k; ++c) slots[std::size_t(m) * k + c].resize(0, 0);
        }
        live.clear();
    }
};

void add_product(Eigen::MatrixXd& dst, const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs) {
    if (lhs.size() == 0 || rhs.size() == 0) return;
    if (dst.size() == 0) {
        dst.noalias() = lhs * rhs;
    } else {
        dst.noalias() += lhs * rhs;
    }
}

}  // namespace

// Ordered colorful closed-walk sum for one cycle word, all start vertices,
// divided by the class automorphism count.
double dp_cycle_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                    const DecoratedClass& cls, const Coloring& col) {
    const DecorationWord& w = cls.canonical_word;
    if (w.topology != graphfam::Topology::Cycle || cls.tag != graphfam::FamilyTag::H) {
        throw ParamError("dp_cycle_sum expects a cycle class from family H");
    }
    if (X.rows() != X.cols() || Y.rows() != Y.cols() || X.rows() != Y.rows()) {
        throw ParamError("dp_cycle_sum expects square matrices of equal size");
    }
    if (col.k != w.len) throw ParamError("dp_cycle_sum: palette size must equal ell");
    if (col.k > kMaxCycleBits) throw ParamError("dp_cycle_sum: ell too large for subset DP");
    if (static_cast<int>(col.assignment.size()) != X.rows()) {
        throw ParamError("dp_cycle_sum: coloring size mismatch");
    }

    const int p = col.k;
    const Blocks bl = make_blocks_unipartite(X, Y, col);
    double total = 0.0;

    for (int cs = 0; cs < p; ++cs) {
        if (bl.a_members[cs].empty()) continue;
        Table cur(p), nxt(p);
        const std::uint32_t m0 = 1u << cs;
        for (int c = 0; c < p; ++c) {
            if (c == cs) continue;
            const Eigen::MatrixXd& b = bl.block(w.bullet(0), cs, c);
            if (b.size() == 0) continue;
            cur.at(m0 | (1u << c), c) = b;
        }
        for (int c = 0; c < p; ++c) {
            if (c != cs) cur.live.push_back(m0 | (1u << c));
        }

        for (int step = 1; step + 1 < w.len; ++step) {
            nxt.clear();
            for (std::uint32_t mask : cur.live) {
                for (int c = 0; c < p; ++c) {
                    Eigen::MatrixXd& src = cur.at(mask, c);
                    if (src.size() == 0) continue;
                    for (int c2 = 0; c2 < p; ++c2) {
                        if (mask & (1u << c2)) continue;
                        const Eigen::MatrixXd& b = bl.block(w.bullet(step), c, c2);
                        if (b.size() == 0) continue;
                        const std::uint32_t m2 = mask | (1u << c2);
                        add_product(nxt.at(m2, c2), src, b);
                        if (std::find(nxt.live.begin(), nxt.live.end(), m2) == nxt.live.end()) {
                            nxt.live.push_back(m2);
                        }
                    }
                }
            }
            std::swap(cur, nxt);
        }

        // closing edge back into the start class
        for (std::uint32_t mask : cur.live) {
            if (__builtin_popcount(mask) != p) continue;
            for (int c = 0; c < p; ++c) {
                const Eigen::MatrixXd& t = cur.at(mask, c);
                if (t.size() == 0) continue;
                const Eigen::MatrixXd& b = bl.block(w.bullet(w.len - 1), c, cs);
                if (b.size() == 0) continue;
                total += t.cwiseProduct(b.transpose()).sum();
            }
        }
    }
    return total / cls.aut;
}

double dp_bipartite_cycle_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                              const DecoratedClass& cls, const Coloring& col) {
    const DecorationWord& w = cls.canonical_word;
    if (cls.tag != graphfam::FamilyTag::G) {
        throw ParamError("dp_bipartite_cycle_sum expects a class from family G");
    }
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
        throw ParamError("dp_bipartite_cycle_sum expects matrices of equal shape");
    }
    if (col.n_a != X.rows()) throw ParamError("dp_bipartite_cycle_sum: coloring split mismatch");
    if (col.k != 2 * w.len) throw ParamError("dp_bipartite_cycle_sum: palette must be 2*ell");
    if (col.k > kMaxCycleBits) throw ParamError("dp_bipartite_cycle_sum: ell too large");

    const int p = col.k;
    const Blocks bl = make_blocks_bipartite(X, Y, col);
    double total = 0.0;

    for (int cs = 0; cs < p; ++cs) {
        if (bl.a_members[cs].empty()) continue;
        Table cur(p), nxt(p);
        const std::uint32_t m0 = 1u << cs;

        // first pair: v_1 (class cs) - u_1 (class cb) - v_2 (class c)
        for (int cb = 0; cb < p; ++cb) {
            if (cb == cs || bl.b_members[cb].empty()) continue;
            const Eigen::MatrixXd& left = bl.block(w.bullet(0), cs, cb);
            for (int c = 0; c < p; ++c) {
                if (c == cs || c == cb || bl.a_members[c].empty()) continue;
                const Eigen::MatrixXd& right = bl.block(w.bullet(0), c, cb);
                const std::uint32_t m = m0 | (1u << cb) | (1u << c);
                add_product(cur.at(m, c), left, right.transpose());
                if (std::find(cur.live.begin(), cur.live.end(), m) == cur.live.end()) {
                    cur.live.push_back(m);
                }
            }
        }

        for (int step = 1; step + 1 < w.len; ++step) {
            nxt.clear();
            for (std::uint32_t mask : cur.live) {
                for (int c = 0; c < p; ++c) {
                    Eigen::MatrixXd& src = cur.at(mask, c);
                    if (src.size() == 0) continue;
                    for (int cb = 0; cb < p; ++cb) {
                        if ((mask & (1u << cb)) || bl.b_members[cb].empty()) continue;
                        const Eigen::MatrixXd tmp = src * bl.block(w.bullet(step), c, cb);
                        for (int c2 = 0; c2 < p; ++c2) {
                            if (((mask | (1u << cb)) & (1u << c2)) || bl.a_members[c2].empty()) {
                                continue;
                            }
                            const std::uint32_t m2 = mask | (1u << cb) | (1u << c2);
                            add_product(nxt.at(m2, c2), tmp,
                                        bl.block(w.bullet(step), c2, cb).transpose());
                            if (std::find(nxt.live.begin(), nxt.live.end(), m2) ==
                                nxt.live.end()) {
                                nxt.live.push_back(m2);
                            }
                        }
                    }
                }
            }
            std::swap(cur, nxt);
        }

        // closing pair: v_ell - u_ell (the one unused color) - v_1
        for (std::uint32_t mask : cur.live) {
            if (__builtin_popcount(mask) != p - 1) continue;
            const std::uint32_t rem = (~mask) & ((1u << p) - 1u);
            const int cb = __builtin_ctz(rem);
            if (bl.b_members[cb].empty()) continue;
            for (int c = 0; c < p; ++c) {
                const Eigen::MatrixXd& t = cur.at(mask, c);
                if (t.size() == 0) continue;
                const Eigen::MatrixXd closing = bl.block(w.bullet(w.len - 1), c, cb) *
                                                bl.block(w.bullet(w.len - 1), cs, cb).transpose();
                total += t.cwiseProduct(closing.transpose()).sum();
            }
        }
    }
    return total / cls.aut;
}

// Fused detection kernel. Walks are rooted at color 0 (every colorful
// ell-cycle uses color 0 exactly once, and the per-word weight Xi is
// rotation invariant, so the rooted sum times ell equals the unrooted one).
// State matrices stack the first decoration along rows (bullet-start block
// on top); the second index tracks the last decoration so the rho factor
// for a decoration change can be applied at each extension.
double weighted_cycle_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          double lambda, double mu, double rho, int ell, const Coloring& col) {
    if (ell < 3) throw ParamError("weighted_cycle_sum requires ell >= 3");
    if (col.k != ell) throw ParamError("weighted_cycle_sum: palette size must equal ell");
    if (col.k > kMaxCycleBits) throw ParamError("weighted_cycle_sum: ell too large");
    if (X.rows() != X.cols() || X.rows() != Y.rows() || Y.rows() != Y.cols()) {
        throw ParamError("weighted_cycle_sum expects square matrices of equal size");
    }
    if (static_cast<int>(col.assignment.size()) != X.rows()) {
        throw ParamError("weighted_cycle_sum: coloring size mismatch");
    }

    const int p = col.k;
    const Blocks bl = make_blocks_unipartite(X, Y, col);
    const int n0 = static_cast<int>(bl.a_members[0].size());
    if (n0 == 0) return 0.0;

    // slot(mask, c, dl): (2*n0) x |class c| matrix
    const auto idx = [p](std::uint32_t mask, int c, int dl) {
        return (std::size_t(mask) * p + c) * 2 + dl;
    };
    std::vector<Eigen::MatrixXd> cur(std::size_t(1u << p) * p * 2);
    std::vector<Eigen::MatrixXd> nxt(std::size_t(1u << p) * p * 2);
    std::vector<std::uint32_t> live, next_live;

    const auto weighted_block = [&](int dec, int a, int b) -> Eigen::MatrixXd {
        const Eigen::MatrixXd& base = bl.block(dec == 1, a, b);
        return (dec == 1 ? lambda : mu) * base;
    };

    // first edge out of the root class
    for (int c = 1; c < p; ++c) {
        if (bl.a_members[c].empty()) continue;
        const std::uint32_t m = 1u | (1u << c);
        for (int d = 0; d < 2; ++d) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * n0, bl.a_members[c].size());
            if (d == 1) {
                t.topRows(n0) = weighted_block(1, 0, c);
            } else {
                t.bottomRows(n0) = weighted_block(0, 0, c);
            }
            cur[idx(m, c, d)] = std::move(t);
        }
        live.push_back(m);
    }

    for (int step = 1; step + 1 < ell; ++step) {
        for (std::uint32_t m : next_live) {
            for (int c = 0; c < p; ++c) {
                for (int d = 0; d < 2; ++d) nxt[idx(m, c, d)].resize(0, 0);
            }
        }
        next_live.clear();
        for (std::uint32_t mask : live) {
            for (int c = 1; c < p; ++c) {
                if (!(mask & (1u << c))) continue;
                const Eigen::MatrixXd& sb = cur[idx(mask, c, 1)];
                const Eigen::MatrixXd& sc = cur[idx(mask, c, 0)];
                if (sb.size() == 0 && sc.size() == 0) continue;
                for (int d2 = 0; d2 < 2; ++d2) {
                    // rho on a decoration change between consecutive edges
                    Eigen::MatrixXd combo;
                    if (sb.size() && sc.size()) {
                        combo = (d2 == 1) ? (sb + rho * sc).eval() : (rho * sb + sc).eval();
                    } else if (sb.size()) {
                        combo = (d2 == 1) ? sb : (rho * sb).eval();
                    } else {
                        combo = (d2 == 1) ? (rho * sc).eval() : sc;
                    }
                    for (int c2 = 1; c2 < p; ++c2) {
                        if (mask & (1u << c2)) continue;
                        if (bl.a_members[c2].empty()) continue;
                        const std::uint32_t m2 = mask | (1u << c2);
                        Eigen::MatrixXd& dst = nxt[idx(m2, c2, d2)];
                        const bool fresh = dst.size() == 0;
                        add_product(dst, combo, weighted_block(d2, c, c2));
                        if (fresh && dst.size() != 0 &&
                            std::find(next_live.begin(), next_live.end(), m2) == next_live.end()) {
                            next_live.push_back(m2);
                        }
                    }
                }
            }
        }
        std::swap(cur, nxt);
        std::swap(live, next_live);
    }

    // closing edge back into the root class, with the two wrap-around
    // decoration-change factors (last->closing and closing->first)
    const std::uint32_t full = (1u << p) - 1u;
    double rooted = 0.0;
    for (int c = 1; c < p; ++c) {
        const Eigen::MatrixXd& sb = cur[idx(full, c, 1)];
        const Eigen::MatrixXd& sc = cur[idx(full, c, 0)];
        if (sb.size() == 0 && sc.size() == 0) continue;
        for (int dc = 0; dc < 2; ++dc) {
            Eigen::MatrixXd combo;
            if (sb.size() && sc.size()) {
                combo = (dc == 1) ? (sb + rho * sc).eval() : (rho * sb + sc).eval();
            } else if (sb.size()) {
                combo = (dc == 1) ? sb : (rho * sb).eval();
            } else {
                combo = (dc == 1) ? (rho * sc).eval() : sc;
            }
            const Eigen::MatrixXd closing = weighted_block(dc, c, 0);
            if (closing.size() == 0) continue;
            // top rows started with a bullet edge, bottom rows with circle
            const Eigen::MatrixXd ct = closing.transpose();
            const double top = combo.topRows(n0).cwiseProduct(ct).sum();
            const double bot = combo.bottomRows(n0).cwiseProduct(ct).sum();
            rooted += (dc == 1 ? top + rho * bot : rho * top + bot);
        }
    }
    // rooted = sum over words of Xi(word) * rooted walk sum; the class sum
    // Sum_H Xi(H) F_H equals half of it.
    return 0.5 * rooted;
}

}  // namespace spikecount::counting
