#ifndef MFSC_POD_HPP
#define MFSC_POD_HPP

#include <cstddef>
#include <vector>

#include "mfsc/fem.hpp"
#include "mfsc/forcing.hpp"
#include "mfsc/linalg.hpp"

namespace mfsc {

struct SnapshotSet {
    Matrix matrix; // Y, N x S, column i = alpha(t_i)
    Vector times;  // S snapshot times, t_1 = T/S .. t_S = T
};

// POD of one trajectory: eigenpairs of the snapshot correlation matrix,
// mode coefficients in the FE basis, and the mean flow.
struct PodBasis {
    Matrix snapshots; // Y, N x S
    Vector snapshot_times;
    std::size_t snapshot_count = 0; // S
    bool includes_initial = false;  // first column is alpha(0)
    Vector mean_flow;               // U, size N
    SymMatrix corr;                 // K, S x S
    EigDecomposition eig;           // all S eigenpairs, values descending
    Matrix modes;                   // psi, N x M
    std::size_t mode_count = 0;     // M
    RandomPoint source_point;
};

// Reduced operators.  The advection pieces use the grouped form (products
// interpolated at mesh nodes), which is the exact expansion of the GFE
// nonlinearity about the mean flow; with a full-rank basis the reduced
// system is then a change of variables of the high-fidelity one.
struct RomOperators {
    Matrix mass_r;     // (psi_j, psi_i), M x M
    Matrix lin_r;      // mu*(psi_j', psi_i') + grouped mean-flow advection
    Matrix nhat;       // M x M(M+1)/2
    Matrix gamma;      // node values psi_j(x_n), N x M
    Matrix gamma_hat;  // N x M(M+1)/2, cross columns doubled
    Vector load_const; // forcing-independent part of V(t), size M
    std::size_t modes = 0;
    std::size_t n_fe = 0;
};

struct RomResult {
    Vector times;
    std::vector<Vector> reduced; // a(t), size M per level
    std::vector<Vector> lifted;  // U + psi*a(t), size N per level
};

// Select S equally spaced post-initial levels, t_1 = T/S .. t_S = T.
// Requires S to divide the step count.
SnapshotSet build_snapshots(const Trajectory& traj, std::size_t count);

// K = (1/S) Ytilde^T Ytilde with Ytilde = L^T Y.
SymMatrix correlation(const Matrix& snapshots, const LowerBidiagonal& mass_chol);

// psi = Y Z (S Lambda)^{-1/2}, first `mode_count` columns.
Matrix pod_modes(const Matrix& snapshots, const EigDecomposition& eig, std::size_t snapshot_count,
                 std::size_t mode_count);

Vector mean_flow(const Matrix& snapshots);

// Relative eigenvalue cutoff guarding (S Lambda)^{-1/2}.
inline constexpr double kModeTol = 1e-12;

// Number of eigenvalues above kModeTol * lambda_1.
std::size_t numerical_rank(const EigDecomposition& eig);

// [a1a1, a1a2, ..., a1aM, a2a2, ..., aMaM].
Vector quad_pack(const Vector& a, std::size_t modes);
Matrix quad_pack_jacobian(const Vector& a, std::size_t modes);
std::size_t quad_pack_size(std::size_t modes);

// Full pipeline snapshot -> basis; mode count is clamped to the numerical
// rank when clamp_to_rank is set, otherwise a short rank throws RankDeficient.
// With include_initial the state at t = 0 is prepended as an extra snapshot
// column (snapshot_count counts it), which keeps the initial condition inside
// the mode span; without it the reduced solve starts from a lossy projection
// of u0.
PodBasis build_pod_basis(const Trajectory& traj, const FemOperators& fem, std::size_t snapshot_count,
                         std::size_t mode_count, bool clamp_to_rank = true,
                         bool include_initial = true);

RomOperators assemble_rom(const PodBasis& basis, const FemOperators& fem, double mu);

// Same operators for a caller-supplied mode matrix (used with improved bases).
RomOperators assemble_rom_with_modes(const Matrix& modes, const Vector& mean, const FemOperators& fem,
                                     double mu);

// Crank-Nicolson + Newton on the reduced system; initial value is the
// M-orthogonal projection of u0 - U onto the modes.
RomResult solve_rom(const RandomPoint& zeta, const RomOperators& rom, const PodBasis& basis,
                    const GfeConfig& cfg);

RomResult solve_rom_with_modes(const RandomPoint& zeta, const RomOperators& rom, const Matrix& modes,
                               const Vector& mean, const GfeConfig& cfg);

} // namespace mfsc

#endif
