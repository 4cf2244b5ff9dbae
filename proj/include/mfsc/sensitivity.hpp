#ifndef MFSC_SENSITIVITY_HPP
#define MFSC_SENSITIVITY_HPP

#include <cstddef>
#include <vector>

#include "mfsc/fem.hpp"
#include "mfsc/linalg.hpp"
#include "mfsc/pod.hpp"

namespace mfsc {

inline constexpr double kNullTol = 1e-8;
inline constexpr double kGapTol = 1e-6;

// Derivatives of the POD ingredients along one direction zeta - xi.
struct SensitivityBundle {
    Matrix y_theta;    // snapshot sensitivities, N x S
    SymMatrix k_theta; // correlation sensitivity, S x S
    Vector lam_theta;  // per retained mode
    Matrix z_theta;    // S x M
    Matrix psi_theta;  // N x M
    Vector direction;  // zeta - xi
    std::vector<std::size_t> dropped_modes; // near-degenerate modes, sensitivities zeroed
};

enum class BasisKind { Extrapolated, Expanded };

// Locally improved reduced basis.  Extrapolated keeps the mode count;
// expanded concatenates modes and sensitivities.  Both are returned
// M-orthonormal.
struct ImprovedBasis {
    BasisKind kind = BasisKind::Extrapolated;
    Matrix modes;
    double delta_theta = 0.0;
    bool degraded = false; // expanded fell back to the original modes
    Vector mean_flow;
};

// Linearized Burgers equation along theta: z_t + (zu)_x = mu z_xx + d_theta f,
// zero initial and boundary data.  The advection term uses the grouped
// discretization advection*diag(alpha)*z, the exact theta-derivative of the
// GFE nonlinearity, with alpha read from the stored trajectory; the result is
// sampled at the snapshot times (the t = 0 column is identically zero when
// the snapshot set carries the initial state).
Matrix solve_sensitivity_pde(const RandomPoint& xi, const RandomPoint& zeta, const Trajectory& traj,
                             const FemOperators& fem, const ForcingSpec& spec, double mu,
                             std::size_t snapshot_count, bool include_initial = false);

// K^theta = (1/S)(Yt^theta^T Yt + Yt^T Yt^theta), Yt = L^T Y.
SymMatrix correlation_sensitivity(const Matrix& snapshots, const Matrix& y_theta,
                                  const LowerBidiagonal& mass_chol);

struct EigenSensitivity {
    Vector lam_theta; // modes entries
    Matrix z_theta;   // S x modes
};

// lambda_k^theta = Z_k^T K^theta Z_k; Z_k^theta from the minimum-norm solve of
// (K - lambda_k I) s = -(K^theta - lambda_k^theta I) Z_k, corrected to be
// orthogonal to Z_k.  Throws NearDegenerateEigenvalue when a retained
// eigenvalue gap falls below gap_tol * lambda_1.
EigenSensitivity eigen_sensitivity(const SymMatrix& corr, const SymMatrix& k_theta,
                                   const EigDecomposition& eig, std::size_t modes,
                                   double null_tol = kNullTol, double gap_tol = kGapTol);

// Single-mode version used to drop degenerate modes individually.
void eigen_sensitivity_mode(const SymMatrix& corr, const SymMatrix& k_theta,
                            const EigDecomposition& eig, std::size_t k, double null_tol,
                            double gap_tol, double& lam_theta, Vector& z_theta);

// psi^theta = Y^theta Z (S Lambda)^{-1/2} + Y Z^theta (S Lambda)^{-1/2}
//             - 1/2 psi Lambda^theta Lambda^{-1}.
Matrix mode_sensitivity(const PodBasis& basis, const Matrix& y_theta,
                        const EigenSensitivity& eigsens);

enum class DegeneracyPolicy { Strict, DropDegenerate };

// Full pipeline for one direction.  Under DropDegenerate, modes that fail the
// eigenvalue-gap guard keep zero sensitivities and are listed in
// dropped_modes.
SensitivityBundle build_sensitivity_bundle(const PodBasis& basis, const FemOperators& fem,
                                           const ForcingSpec& spec, const Trajectory& traj,
                                           const RandomPoint& zeta,
                                           DegeneracyPolicy policy = DegeneracyPolicy::DropDegenerate);

// delta_theta scales the extrapolation step; the mean flow is carried over
// unchanged unless extrapolate_mean is set.
ImprovedBasis improve_basis(const PodBasis& basis, const SensitivityBundle& bundle, BasisKind kind,
                            double delta_theta, const FemOperators& fem,
                            bool extrapolate_mean = false);

} // namespace mfsc

#endif
