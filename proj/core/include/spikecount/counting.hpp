#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "spikecount/graphfam.hpp"
#include "spikecount/threadpool.hpp"

namespace spikecount::counting {

// Vertex coloring over [n] (or [n] followed by [N] for bipartite work).
struct Coloring {
    int k = 0;
    std::vector<int> assignment;
    int n_a = -1;  // bipartite split point; -1 for one-sided colorings

    int color(int v) const { return assignment[v]; }
    int color_b(int u) const { return assignment[n_a + u]; }
    int n_vertices() const { return static_cast<int>(assignment.size()); }
};

Coloring random_coloring(int n_vertices, int k, std::uint64_t seed);
Coloring random_bipartite_coloring(int n, int N, int k, std::uint64_t seed);

// Probability m!/m^m that m vertices under an m-palette are colorful.
double colorful_probability(int family_size, int palette);

// Colorful subgraph sums for a single decorated class; each matches the
// definitional subgraph sum (automorphism-deduplicated). Palette sizes:
// cycles ell, bipartite cycles 2*ell, paths ell+1, bipartite paths 2*ell+1.
double dp_cycle_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                    const graphfam::DecoratedClass& cls, const Coloring& col);
double dp_bipartite_cycle_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                              const graphfam::DecoratedClass& cls, const Coloring& col);
double dp_path_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                   const graphfam::DecoratedClass& cls, const Coloring& col, int u, int v);
double dp_bipartite_path_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                             const graphfam::DecoratedClass& cls, const Coloring& col,
                             int u, int v);

// Full rows of endpoint-pinned path sums from one pivot (entry at the
// pivot itself is zero).
Eigen::VectorXd dp_path_row(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                            const graphfam::DecoratedClass& cls, const Coloring& col, int pivot);
Eigen::VectorXd dp_bipartite_path_row(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                      const graphfam::DecoratedClass& cls, const Coloring& col,
                                      int pivot);

// Fused detection kernel: sum over every class [H] in H(ell) of
// Xi(H) * F_H(X, Y, col) in one color-rooted pass. Equals the per-class
// route exactly; used where the class-by-class loop would dominate.
double weighted_cycle_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          double lambda, double mu, double rho, int ell, const Coloring& col);

// Exhaustive oracle over injective vertex maps; optional colorful filter
// and endpoint pinning. Guarded to n^{vertices} <= 1e8.
double brute_force_sum(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                       const graphfam::DecoratedClass& cls,
                       const Coloring* col = nullptr,
                       std::optional<std::pair<int, int>> endpoints = std::nullopt);

}  // namespace spikecount::counting
