#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spikecount/common.hpp"

namespace spikecount::graphfam {

// Edge decorations: BULLET edges read from X, CIRCLE edges from Y.
enum class Decoration : int { Circle = 0, Bullet = 1 };

enum class Topology { Cycle, Path };

// A decoration sequence in traversal order, packed little-endian
// (bit i set means edge i is a bullet).
struct DecorationWord {
    std::uint32_t bits = 0;
    int len = 0;
    Topology topology = Topology::Cycle;

    bool bullet(int i) const { return (bits >> i) & 1u; }
    std::string str() const;  // e.g. "bbc" (b = bullet, c = circle)
};

enum class FamilyTag { H, G, J, Jstar, I, Istar, Istarstar };

const char* tag_name(FamilyTag tag);

// One isomorphism class of decorated cycles/paths. For the bipartite
// families (G, I, Istar, Istarstar) the word encodes decoration pairs:
// each symbol decorates the two bipartite edges meeting at a [N]-side
// vertex, except the trailing unpaired edge of odd Istarstar classes.
struct DecoratedClass {
    DecorationWord canonical_word;
    FamilyTag tag = FamilyTag::H;
    int aut = 1;        // decoration-preserving automorphisms of the graph
    int e_bullet = 0;   // bullet edge count of the realized graph
    int e_circ = 0;     // circle edge count of the realized graph
    int diff = 0;       // vertices incident to both decorations
    bool odd_path = false;  // Istarstar classes of length 2*ell - 1

    int n_vertices() const;
    int n_edges() const { return e_bullet + e_circ; }
};

struct FamilyTable {
    int ell = 0;
    FamilyTag tag = FamilyTag::H;
    std::vector<DecoratedClass> classes;

    // Filled by attach_weights: per-class Xi/Upsilon and the normalizer
    // beta = sum w^2 / aut for the parameters used.
    std::vector<double> weights;
    double beta = 0.0;

    void attach_weights(double lambda, double mu, double rho);
    std::string to_json() const;
};

// Enumerates the family up to isomorphism. Bounds: cycles need
// 3 <= ell <= 20 (G allows ell >= 2), paths need 1 <= ell <= 20.
FamilyTable enumerate_family(FamilyTag tag, int ell);

int aut_count(const DecorationWord& w);

// Xi(H) = lambda^|Eb| mu^|Ec| rho^|diff|  (Wigner families H, J)
double xi_weight(const DecoratedClass& cls, double lambda, double mu, double rho);
// Upsilon(H) = lambda^(|Eb|/2) mu^(|Ec|/2) rho^|diff|  (bipartite families)
double upsilon_weight(const DecoratedClass& cls, double lambda, double mu, double rho);
// Dispatches on the class tag.
double class_weight(const DecoratedClass& cls, double lambda, double mu, double rho);

enum class BetaMode { Auto, Enumerate, ClosedForm };

// beta = sum over classes of weight^2 / aut. The closed forms (transfer
// matrix trace for cycles, pinned boundary vector for paths) are only
// used after a one-time equality check against enumeration; on mismatch
// the fast path stays disabled for the rest of the process.
double beta(FamilyTag tag, int ell, double lambda, double mu, double rho,
            BetaMode mode = BetaMode::Auto);

struct TransferMatrix {
    Eigen::Matrix2d M;
    double a_plus = 0.0;
    double a_minus = 0.0;
};

TransferMatrix transfer_matrix(double lambda, double mu, double rho);
double a_plus(double lambda, double mu, double rho);

// F(lambda, mu, rho, gamma); +infinity when a correlated-term denominator
// is non-positive. Throws ParamError for gamma <= 0.
double f_threshold(double lambda, double mu, double rho, double gamma);

enum class ThresholdMethod { Subgraph, PLS, CCA };

// Smallest mu in [0, 10] whose success condition holds, by bisection to
// absolute tolerance 1e-6; +infinity if none does.
double critical_mu(double lambda, double rho, double gamma, ThresholdMethod method);

}  // namespace spikecount::graphfam
