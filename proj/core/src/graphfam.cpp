#include "spikecount/graphfam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "spikecount/baselines.hpp"

namespace spikecount::graphfam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double powi(double base, int e) {
    double v = 1.0;
    for (int i = 0; i < e; ++i) v *= base;
    return v;  // 0^0 = 1 by construction
}

std::uint32_t rotate_word(std::uint32_t w, int len, int j) {
    return ((w >> j) | (w << (len - j))) & ((1u << len) - 1u);
}

std::uint32_t reverse_word(std::uint32_t w, int len) {
    std::uint32_t r = 0;
    for (int i = 0; i < len; ++i) {
        if ((w >> i) & 1u) r |= 1u << (len - 1 - i);
    }
    return r;
}

int popcount(std::uint32_t w) { return __builtin_popcount(w); }

int circular_switches(std::uint32_t w, int len) {
    int d = 0;
    for (int i = 0; i < len; ++i) {
        if (((w >> i) & 1u) != ((w >> ((i + 1) % len)) & 1u)) ++d;
    }
    return d;
}

int linear_switches(std::uint32_t w, int len) {
    int d = 0;
    for (int i = 0; i + 1 < len; ++i) {
        if (((w >> i) & 1u) != ((w >> (i + 1)) & 1u)) ++d;
    }
    return d;
}

std::uint32_t canonical_cycle(std::uint32_t w, int len) {
    std::uint32_t best = w;
    for (int refl = 0; refl < 2; ++refl) {
        std::uint32_t base = refl ? reverse_word(w, len) : w;
        for (int j = 0; j < len; ++j) best = std::min(best, rotate_word(base, len, j));
    }
    return best;
}

int aut_cycle(std::uint32_t w, int len) {
    int cnt = 0;
    for (int refl = 0; refl < 2; ++refl) {
        std::uint32_t base = refl ? reverse_word(w, len) : w;
        for (int j = 0; j < len; ++j) {
            if (rotate_word(base, len, j) == w) ++cnt;
        }
    }
    return cnt;
}

bool is_cycle_tag(FamilyTag t) { return t == FamilyTag::H || t == FamilyTag::G; }
bool is_bipartite_tag(FamilyTag t) {
    return t == FamilyTag::G || t == FamilyTag::I || t == FamilyTag::Istar ||
           t == FamilyTag::Istarstar;
}

DecoratedClass make_class(FamilyTag tag, std::uint32_t w, int len, bool odd_path) {
    DecoratedClass c;
    c.tag = tag;
    c.odd_path = odd_path;
    c.canonical_word.bits = w;
    c.canonical_word.len = len;
    c.canonical_word.topology = is_cycle_tag(tag) ? Topology::Cycle : Topology::Path;

    const int nb = popcount(w);
    const int nc = len - nb;
    if (is_bipartite_tag(tag)) {
        if (odd_path) {
            // pairs for symbols 1..len-1 plus one unpaired trailing edge
            const bool last = (w >> (len - 1)) & 1u;
            c.e_bullet = 2 * (nb - (last ? 1 : 0)) + (last ? 1 : 0);
            c.e_circ = 2 * (nc - (last ? 0 : 1)) + (last ? 0 : 1);
        } else {
            c.e_bullet = 2 * nb;
            c.e_circ = 2 * nc;
        }
    } else {
        c.e_bullet = nb;
        c.e_circ = nc;
    }
    c.diff = is_cycle_tag(tag) ? circular_switches(w, len) : linear_switches(w, len);
    c.aut = odd_path ? 1 : aut_count(c.canonical_word);
    return c;
}

}  // namespace

std::string DecorationWord::str() const {
    std::string s(len, 'c');
    for (int i = 0; i < len; ++i) {
        if (bullet(i)) s[i] = 'b';
    }
    return s;
}

const char* tag_name(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::H: return "H";
        case FamilyTag::G: return "G";
        case FamilyTag::J: return "J";
        case FamilyTag::Jstar: return "Jstar";
        case FamilyTag::I: return "I";
        case FamilyTag::Istar: return "Istar";
        case FamilyTag::Istarstar: return "Istarstar";
    }
    return "?";
}

int DecoratedClass::n_vertices() const {
    const int len = canonical_word.len;
    switch (tag) {
        case FamilyTag::H: return len;
        case FamilyTag::G: return 2 * len;
        case FamilyTag::J:
        case FamilyTag::Jstar: return len + 1;
        case FamilyTag::I:
        case FamilyTag::Istar: return 2 * len + 1;
        case FamilyTag::Istarstar: return odd_path ? 2 * len : 2 * len + 1;
    }
    return 0;
}

int aut_count(const DecorationWord& w) {
    if (w.topology == Topology::Cycle) return aut_cycle(w.bits, w.len);
    return w.bits == reverse_word(w.bits, w.len) ? 2 : 1;
}

FamilyTable enumerate_family(FamilyTag tag, int ell) {
    const bool cycle = is_cycle_tag(tag);
    const int min_ell = tag == FamilyTag::H ? 3 : (tag == FamilyTag::G ? 2 : 1);
    if (ell < min_ell || ell > 20) {
        throw ParamError(std::string("enumerate_family: ell out of bounds for family ") +
                         tag_name(tag));
    }

    FamilyTable table;
    table.ell = ell;
    table.tag = tag;

    const std::uint32_t total = 1u << ell;
    std::vector<bool> seen(total, false);
    const bool pinned_ends =
        tag == FamilyTag::J || tag == FamilyTag::I;  // leaves in V_bullet

    for (std::uint32_t w = 0; w < total; ++w) {
        if (pinned_ends) {
            const bool first = w & 1u;
            const bool last = (w >> (ell - 1)) & 1u;
            if (!(first && last) && ell > 1) continue;
            if (ell == 1 && !first) continue;
        }
        const std::uint32_t canon =
            cycle ? canonical_cycle(w, ell)
                  : std::min(w, reverse_word(w, ell));
        if (seen[canon]) continue;
        seen[canon] = true;
        table.classes.push_back(make_class(tag, canon, ell, /*odd_path=*/false));
    }

    if (tag == FamilyTag::Istarstar) {
        // also the odd-length classes (2*ell - 1 edges); no reversal symmetry
        for (std::uint32_t w = 0; w < total; ++w) {
            table.classes.push_back(make_class(tag, w, ell, /*odd_path=*/true));
        }
    }
    return table;
}

double xi_weight(const DecoratedClass& cls, double lambda, double mu, double rho) {
    return powi(lambda, cls.e_bullet) * powi(mu, cls.e_circ) * powi(rho, cls.diff);
}

double upsilon_weight(const DecoratedClass& cls, double lambda, double mu, double rho) {
    return std::pow(lambda, cls.e_bullet / 2.0) * std::pow(mu, cls.e_circ / 2.0) *
           powi(rho, cls.diff);
}

double class_weight(const DecoratedClass& cls, double lambda, double mu, double rho) {
    if (is_bipartite_tag(cls.tag)) return upsilon_weight(cls, lambda, mu, rho);
    return xi_weight(cls, lambda, mu, rho);
}

void FamilyTable::attach_weights(double lambda, double mu, double rho) {
    weights.resize(classes.size());
    double b = 0.0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        weights[i] = class_weight(classes[i], lambda, mu, rho);
        b += weights[i] * weights[i] / classes[i].aut;
    }
    beta = b;
}

std::string FamilyTable::to_json() const {
    std::ostringstream os;
    os << "{\"family\":\"" << tag_name(tag) << "\",\"ell\":" << ell << ",\"classes\":[";
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto& c = classes[i];
        if (i) os << ",";
        os << "{\"word\":\"" << c.canonical_word.str() << "\",\"aut\":" << c.aut
           << ",\"diff\":" << c.diff;
        if (!weights.empty()) os << ",\"weight\":" << weights[i];
        os << "}";
    }
    os << "]";
    if (!weights.empty()) os << ",\"beta\":" << beta;
    os << "}";
    return os.str();
}

namespace {

double beta_enumerate(FamilyTag tag, int ell, double lambda, double mu, double rho) {
    FamilyTable t = enumerate_family(tag, ell);
    t.attach_weights(lambda, mu, rho);
    return t.beta;
}

Eigen::Matrix2d transfer_power(const Eigen::Matrix2d& m, int e) {
    Eigen::Matrix2d acc = Eigen::Matrix2d::Identity();
    for (int i = 0; i < e; ++i) acc = acc * m;
    return acc;
}

// Closed forms derived from the word-transfer recursion. Cycles: the word
// sum is tr(M^ell) and every dihedral orbit has size 2*ell/aut, giving
// beta_H = tr(M^ell)/(2*ell). Paths: orbit size 2/aut, so beta is half the
// pinned word sum.
double beta_closed_form(FamilyTag tag, int ell, double lambda, double mu, double rho) {
    const TransferMatrix tm = transfer_matrix(lambda, mu, rho);
    switch (tag) {
        case FamilyTag::H:
        case FamilyTag::G: {
            const double tr = std::pow(tm.a_plus, ell) + std::pow(tm.a_minus, ell);
            return tr / (2.0 * ell);
        }
        case FamilyTag::J:
        case FamilyTag::I: {
            const Eigen::Matrix2d p = transfer_power(tm.M, ell - 1);
            return lambda * lambda * p(0, 0) / 2.0;
        }
        case FamilyTag::Jstar:
        case FamilyTag::Istar: {
            const Eigen::Matrix2d p = transfer_power(tm.M, ell - 1);
            const Eigen::Vector2d start(lambda * lambda, mu * mu);
            return (p * start).sum() / 2.0;
        }
        case FamilyTag::Istarstar:
            throw ParamError("no closed form for Istarstar");
    }
    throw ParamError("unknown family");
}

// One-time gate: the closed forms are trusted only after they match the
// enumeration oracle on a small grid.
bool closed_form_validated() {
    static std::once_flag flag;
    static bool ok = false;
    std::call_once(flag, [] {
        const double grid[3] = {0.25, 0.6, 0.95};
        ok = true;
        const FamilyTag tags[4] = {FamilyTag::H, FamilyTag::J, FamilyTag::Jstar, FamilyTag::G};
        for (FamilyTag tag : tags) {
            const int lo = tag == FamilyTag::H || tag == FamilyTag::G ? 3 : 1;
            for (int ell = lo; ell <= 8 && ok; ++ell) {
                for (double l : grid) {
                    for (double m : grid) {
                        for (double r : grid) {
                            const double be = beta_enumerate(tag, ell, l, m, r);
                            const double bc = beta_closed_form(tag, ell, l, m, r);
                            if (std::abs(be - bc) > 1e-9 * std::max(1.0, std::abs(be))) {
                                ok = false;
                            }
                        }
                    }
                }
            }
        }
    });
    return ok;
}

}  // namespace

double beta(FamilyTag tag, int ell, double lambda, double mu, double rho, BetaMode mode) {
    if (lambda < 0 || mu < 0 || rho < 0) throw ParamError("beta requires nonnegative parameters");
    switch (mode) {
        case BetaMode::Enumerate:
            return beta_enumerate(tag, ell, lambda, mu, rho);
        case BetaMode::ClosedForm:
            return beta_closed_form(tag, ell, lambda, mu, rho);
        case BetaMode::Auto:
            if (tag != FamilyTag::Istarstar && closed_form_validated()) {
                return beta_closed_form(tag, ell, lambda, mu, rho);
            }
            return beta_enumerate(tag, ell, lambda, mu, rho);
    }
    throw ParamError("unknown beta mode");
}

TransferMatrix transfer_matrix(double lambda, double mu, double rho) {
    const double l2 = lambda * lambda, m2 = mu * mu, r2 = rho * rho;
    TransferMatrix tm;
    tm.M << l2, l2 * r2, m2 * r2, m2;
    // discriminant written as a sum of squares to avoid cancellation
    const double disc = (l2 - m2) * (l2 - m2) + 4.0 * r2 * r2 * l2 * m2;
    const double root = std::sqrt(disc);
    tm.a_plus = 0.5 * (l2 + m2 + root);
    tm.a_minus = 0.5 * (l2 + m2 - root);
    return tm;
}

double a_plus(double lambda, double mu, double rho) {
    return transfer_matrix(lambda, mu, rho).a_plus;
}

double f_threshold(double lambda, double mu, double rho, double gamma) {
    if (!(gamma > 0.0)) throw ParamError("f_threshold requires gamma > 0");
    const double l2 = lambda * lambda, m2 = mu * mu, r2 = rho * rho;
    const double d1 = gamma - l2 + l2 * r2;
    const double d2 = gamma - m2 + m2 * r2;
    if (d1 <= 0.0 || d2 <= 0.0) return kInf;
    const double t3 = l2 * r2 / d1 + m2 * r2 / d2;
    return std::max({l2 / gamma, m2 / gamma, t3});
}

double critical_mu(double lambda, double rho, double gamma, ThresholdMethod method) {
    if (lambda < 0) throw ParamError("critical_mu requires lambda >= 0");
    const auto success = [&](double mu) {
        switch (method) {
            case ThresholdMethod::Subgraph:
                return f_threshold(lambda, mu, rho, gamma) > 1.0;
            case ThresholdMethod::PLS:
                return baselines::pls_threshold(lambda, mu, rho) <= gamma;
            case ThresholdMethod::CCA:
                return baselines::cca_condition(lambda, mu, rho, gamma);
        }
        return false;
    };

    constexpr double mu_max = 10.0;
    if (success(0.0)) return 0.0;
    if (!success(mu_max)) return kInf;
    double lo = 0.0, hi = mu_max;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (success(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace spikecount::graphfam
