#ifndef MFSC_SPARSE_GRID_HPP
#define MFSC_SPARSE_GRID_HPP

#include <cstddef>
#include <vector>

#include "mfsc/forcing.hpp"
#include "mfsc/linalg.hpp"

namespace mfsc {

// Nested Clenshaw-Curtis rule on [-1, 1]: m_1 = 1 (node 0), m_i = 2^{i-1}+1
// Chebyshev extrema for i >= 2, listed from +1 down to -1.  point_levels[j]
// is the smallest level whose rule contains point j.
struct Rule1D {
    std::size_t level = 0;
    Vector points;
    std::vector<std::size_t> point_levels;

    std::size_t count() const { return points.size(); }
};

Rule1D cc_rule(std::size_t level);

std::size_t cc_count(std::size_t level); // m_i

// One term of the Smolyak combination: coefficient times a tensor rule.
struct SmolyakTerm {
    std::vector<std::size_t> levels; // 1-based per-dimension levels
    double coefficient;
    std::vector<std::size_t> node_ids; // row-major tensor order -> plan node index
};

// Isotropic Smolyak plan over CC rules mapped to [-L, L]^d, with quadrature
// weights for the truncated-renormalized standard-normal density.  "Level q"
// means per-dimension levels i_k >= 1 with i_1+...+i_d <= q + d; nodes are
// stored in visit order (ascending hierarchical level, then lexicographic
// coordinates).
struct SparseGridPlan {
    std::size_t dim = 0;
    std::size_t level = 0;  // q
    double map_bound = 0.0; // L
    std::vector<Vector> nodes;
    std::vector<std::size_t> node_levels; // sum of per-dimension minimal levels
    Vector weights;
    std::vector<SmolyakTerm> terms;
    std::size_t max_level_1d = 0;

    std::size_t node_count() const { return nodes.size(); }
    RandomPoint node_point(std::size_t i) const { return RandomPoint{nodes[i]}; }
};

SparseGridPlan smolyak_plan(std::size_t dim, std::size_t level, double map_bound,
                            std::size_t node_cap = 2000000);

// Quadrature weights of one 1D rule against the truncated-renormalized
// normal density on [-L, L] (composite Gauss-Legendre in the Chebyshev angle).
Vector rule_gauss_weights(const Rule1D& rule, double map_bound);

// Smolyak combination of tensor barycentric-Lagrange interpolants; reproduces
// node values at plan nodes.
double interpolate(const SparseGridPlan& plan, const Vector& node_values, const RandomPoint& zeta);

// E[u^k] ~ sum_j w_j value_j^k.
double moments(const SparseGridPlan& plan, const Vector& node_values, unsigned k);

// Minimum over node pairs of the max-coordinate distance (the eta metric).
double min_pairwise_distance(const SparseGridPlan& plan);

// Gauss-Hermite rule for the standard normal weight (validation helper).
struct GaussHermite {
    Vector nodes;
    Vector weights;
};

GaussHermite gauss_hermite(std::size_t n);

// Closed-form moments of the standard normal truncated to [-L, L].
double truncated_normal_second_moment(double map_bound);
double truncated_normal_fourth_moment(double map_bound);

} // namespace mfsc

#endif
