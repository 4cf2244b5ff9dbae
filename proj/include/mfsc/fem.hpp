#ifndef MFSC_FEM_HPP
#define MFSC_FEM_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "mfsc/forcing.hpp"
#include "mfsc/linalg.hpp"

namespace mfsc {

// Uniform mesh on [0,1] with N interior nodes (N+1 intervals); homogeneous
// Dirichlet values at x_0 = 0 and x_{N+1} = 1 are never represented.
struct Mesh1D {
    std::size_t n_interior = 0;
    double h = 0.0;
    Vector nodes; // N+2 entries, including both boundary nodes

    static Mesh1D uniform(std::size_t intervals);

    std::size_t intervals() const { return n_interior + 1; }
    double interior_node(std::size_t i) const { return nodes[i + 1]; } // i in [0, N)
};

// Piecewise-linear FE operators on the interior nodes.  mass = (b_j, b_i),
// stiffness = (b_j', b_i'), advection = (b_j', b_i); chol is the lower
// Cholesky factor of mass.
struct FemOperators {
    Tridiagonal mass;
    Tridiagonal stiffness;
    Tridiagonal advection;
    LowerBidiagonal chol;
    double mu = 0.0;
    std::size_t n = 0;
    double h = 0.0;
};

struct GfeConfig {
    Mesh1D mesh;
    double mu = 0.0;
    std::size_t steps = 0; // K
    std::function<double(double)> u0;
    ForcingSpec spec;
};

// Time-indexed FE coefficient states of one deterministic solve.
struct Trajectory {
    Vector times;               // K+1 levels, equally spaced, t_0 = 0
    std::vector<Vector> states; // one coefficient vector (size N) per level
    RandomPoint point;
    std::size_t intervals = 0;
    double mu = 0.0;

    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
    double horizon() const { return times.empty() ? 0.0 : times.back(); }
};

// Named initial conditions used by the experiment driver.
std::function<double(double)> initial_condition_paper();
std::function<double(double)> initial_condition_zero();

FemOperators assemble(const Mesh1D& mesh, double mu);

// G(alpha) = advection * (alpha .* alpha).
Vector group_nonlinearity(const Vector& alpha, const FemOperators& ops);

// L2 projection of u0 onto the FE space: solves mass * a0 = [(u0, b_i)].
Vector initial_state(const std::function<double(double)>& u0, const FemOperators& ops,
                     const Mesh1D& mesh);

// Hat integrals of the spatial amplitude, [(sigma, b_i)].
Vector sigma_load(const ForcingSpec& spec, const Mesh1D& mesh);

// [(f_d(t,.), b_i)] by 3-point Gauss per element.
Vector load_vector(const RandomPoint& point, const ForcingSpec& spec, double t,
                   const Mesh1D& mesh);

// FE load vector of an arbitrary integrand: [(f, b_i)] by 3-point Gauss.
Vector assemble_load(const Mesh1D& mesh, const std::function<double(double)>& f);

// Crank-Nicolson with Newton on the grouped nonlinearity.
Trajectory solve_gfe(const RandomPoint& point, const GfeConfig& cfg);

// Discrete L2 helpers (mass-weighted inner product of coefficient vectors).
double mass_inner(const FemOperators& ops, const Vector& a, const Vector& b);
double mass_norm(const FemOperators& ops, const Vector& a);
double relative_l2_error(const FemOperators& ops, const Vector& approx, const Vector& reference);

} // namespace mfsc

#endif
