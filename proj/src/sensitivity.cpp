#include "mfsc/sensitivity.hpp"

#include <cmath>
#include <string>

#include "mfsc/errors.hpp"

namespace mfsc {

namespace {

// advection * diag(alpha): entry (i, j) = advection_ij * alpha_j.
Tridiagonal advection_linearized(const FemOperators& fem, const Vector& alpha) {
    Tridiagonal t;
    const std::size_t n = fem.n;
    t.diag.assign(n, 0.0);
    t.sub.resize(n - 1);
    t.super.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        t.sub[i] = fem.advection.sub[i] * alpha[i];
        t.super[i] = fem.advection.super[i] * alpha[i + 1];
    }
    return t;
}

} // namespace

Matrix solve_sensitivity_pde(const RandomPoint& xi, const RandomPoint& zeta, const Trajectory& traj,
                             const FemOperators& fem, const ForcingSpec& spec, double mu,
                             std::size_t snapshot_count, bool include_initial) {
    if (xi.dim() != zeta.dim() || xi.dim() != spec.dim)
        throw DimMismatch("solve_sensitivity_pde: point dimensions disagree");
    const std::size_t n = fem.n;
    if (traj.states.empty() || traj.states.front().size() != n)
        throw GridMismatch("solve_sensitivity_pde: trajectory mesh differs from operators");
    const std::size_t steps = traj.steps();
    const std::size_t sampled = include_initial ? snapshot_count - 1 : snapshot_count;
    if (sampled < 1 || sampled > steps || steps % sampled != 0)
        throw BadCount("solve_sensitivity_pde: snapshot count incompatible with the step count");

    const Mesh1D mesh = Mesh1D::uniform(traj.intervals);
    RandomPoint direction;
    direction.coords.resize(xi.dim());
    for (std::size_t k = 0; k < xi.dim(); ++k)
        direction.coords[k] = zeta.coords[k] - xi.coords[k];

    const double dt = traj.times[1] - traj.times[0];
    const double half_dt = 0.5 * dt;
    const std::size_t stride = steps / sampled;
    const std::size_t column_offset = include_initial ? 1 : 0;

    Matrix y_theta(n, snapshot_count); // the t = 0 column stays zero
    Vector z(n, 0.0);

    const Vector amplitude = sigma_load(spec, mesh);
    auto dload_at = [&](double t) {
        Vector load = amplitude;
        const double temporal = forcing_temporal(direction, spec, t);
        for (double& v : load) v *= temporal;
        return load;
    };

    Vector dload_now = dload_at(traj.times[0]);
    for (std::size_t step = 0; step < steps; ++step) {
        const Vector& alpha_now = traj.states[step];
        const Vector& alpha_next = traj.states[step + 1];
        const Vector dload_next = dload_at(traj.times[step + 1]);

        // rhs = [M - dt/2 (mu A + N diag(alpha_n))] z + dt/2 (dV_n + dV_{n+1})
        Vector rhs = fem.mass * z;
        {
            const Vector az = fem.stiffness * z;
            const Vector nz = advection_linearized(fem, alpha_now) * z;
            for (std::size_t i = 0; i < n; ++i)
                rhs[i] += half_dt * (-mu * az[i] - nz[i] + dload_now[i] + dload_next[i]);
        }

        // lhs = M + dt/2 (mu A + N diag(alpha_{n+1}))
        Tridiagonal lhs = advection_linearized(fem, alpha_next);
        for (std::size_t i = 0; i < n; ++i)
            lhs.diag[i] = fem.mass.diag[i] + half_dt * (mu * fem.stiffness.diag[i] + lhs.diag[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            lhs.sub[i] = fem.mass.sub[i] + half_dt * (mu * fem.stiffness.sub[i] + lhs.sub[i]);
            lhs.super[i] = fem.mass.super[i] + half_dt * (mu * fem.stiffness.super[i] + lhs.super[i]);
        }
        z = tridiag_solve(lhs, rhs);
        dload_now = dload_next;

        if ((step + 1) % stride == 0)
            y_theta.set_column(column_offset + (step + 1) / stride - 1, z);
    }
    return y_theta;
}

SymMatrix correlation_sensitivity(const Matrix& snapshots, const Matrix& y_theta,
                                  const LowerBidiagonal& mass_chol) {
    if (snapshots.rows() != y_theta.rows() || snapshots.cols() != y_theta.cols())
        throw DimMismatch("correlation_sensitivity: snapshot shapes disagree");
    const std::size_t s = snapshots.cols();
    Matrix wy(snapshots.rows(), s);
    Matrix wyt(snapshots.rows(), s);
    for (std::size_t j = 0; j < s; ++j) {
        wy.set_column(j, lower_bidiag_transpose_apply(mass_chol, snapshots.column(j)));
        wyt.set_column(j, lower_bidiag_transpose_apply(mass_chol, y_theta.column(j)));
    }
    SymMatrix kt(s);
    const double inv_s = 1.0 / static_cast<double>(s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = i; j < s; ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < snapshots.rows(); ++r)
                acc += wyt(r, i) * wy(r, j) + wy(r, i) * wyt(r, j);
            kt.set(i, j, acc * inv_s);
        }
    }
    return kt;
}

void eigen_sensitivity_mode(const SymMatrix& corr, const SymMatrix& k_theta,
                            const EigDecomposition& eig, std::size_t k, double null_tol,
                            double gap_tol, double& lam_theta, Vector& z_theta) {
    const std::size_t s = corr.order();
    const double lam_max = std::abs(eig.values.front());
    for (std::size_t j = 0; j < s; ++j) {
        if (j == k) continue;
        if (std::abs(eig.values[k] - eig.values[j]) <= gap_tol * lam_max)
            throw NearDegenerateEigenvalue("eigen_sensitivity: eigenvalues " + std::to_string(k) +
                                               " and " + std::to_string(j) + " nearly coincide",
                                           k, j);
    }

    const Vector zk = eig.vectors.column(k);
    const Vector ktz = k_theta * zk;
    lam_theta = dot(zk, ktz);

    Vector rhs(s);
    for (std::size_t i = 0; i < s; ++i) rhs[i] = -(ktz[i] - lam_theta * zk[i]);

    // Minimum-norm solve of (K - lambda_k I) s = rhs: the shift shares K's
    // eigenbasis, so expand rhs there and invert the gaps above the cutoff.
    double max_gap = 0.0;
    for (std::size_t j = 0; j < s; ++j)
        max_gap = std::max(max_gap, std::abs(eig.values[j] - eig.values[k]));
    const double cutoff = null_tol * max_gap;

    Vector particular(s, 0.0);
    for (std::size_t j = 0; j < s; ++j) {
        const double gap = eig.values[j] - eig.values[k];
        if (std::abs(gap) <= cutoff) continue;
        double coeff = 0.0;
        for (std::size_t i = 0; i < s; ++i) coeff += eig.vectors(i, j) * rhs[i];
        coeff /= gap;
        for (std::size_t i = 0; i < s; ++i) particular[i] += coeff * eig.vectors(i, j);
    }

    const double along = dot(zk, particular);
    z_theta.resize(s);
    for (std::size_t i = 0; i < s; ++i) z_theta[i] = particular[i] - along * zk[i];
}

EigenSensitivity eigen_sensitivity(const SymMatrix& corr, const SymMatrix& k_theta,
                                   const EigDecomposition& eig, std::size_t modes, double null_tol,
                                   double gap_tol) {
    EigenSensitivity out;
    out.lam_theta.resize(modes);
    out.z_theta = Matrix(corr.order(), modes);
    for (std::size_t k = 0; k < modes; ++k) {
        Vector col;
        eigen_sensitivity_mode(corr, k_theta, eig, k, null_tol, gap_tol, out.lam_theta[k], col);
        out.z_theta.set_column(k, col);
    }
    return out;
}

Matrix mode_sensitivity(const PodBasis& basis, const Matrix& y_theta,
                        const EigenSensitivity& eigsens) {
    const std::size_t m = basis.mode_count;
    const std::size_t n = basis.snapshots.rows();
    const std::size_t s = basis.snapshot_count;
    if (eigsens.lam_theta.size() < m)
        throw DimMismatch("mode_sensitivity: missing eigen sensitivities");
    Matrix psi_theta(n, m);
    for (std::size_t k = 0; k < m; ++k) {
        const double lam = basis.eig.values[k];
        if (!(lam > kModeTol * basis.eig.values.front()))
            throw RankDeficient("mode_sensitivity: mode " + std::to_string(k) + " below rank cutoff");
        const double scale = 1.0 / std::sqrt(static_cast<double>(s) * lam);
        const double ratio = 0.5 * eigsens.lam_theta[k] / lam;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < s; ++j)
                acc += y_theta(i, j) * basis.eig.vectors(j, k) + basis.snapshots(i, j) * eigsens.z_theta(j, k);
            psi_theta(i, k) = acc * scale - ratio * basis.modes(i, k);
        }
    }
    return psi_theta;
}

SensitivityBundle build_sensitivity_bundle(const PodBasis& basis, const FemOperators& fem,
                                           const ForcingSpec& spec, const Trajectory& traj,
                                           const RandomPoint& zeta, DegeneracyPolicy policy) {
    SensitivityBundle bundle;
    const std::size_t d = basis.source_point.dim();
    bundle.direction.resize(d);
    for (std::size_t k = 0; k < d; ++k)
        bundle.direction[k] = zeta.coords[k] - basis.source_point.coords[k];

    bundle.y_theta = solve_sensitivity_pde(basis.source_point, zeta, traj, fem, spec, fem.mu,
                                           basis.snapshot_count, basis.includes_initial);
    bundle.k_theta = correlation_sensitivity(basis.snapshots, bundle.y_theta, fem.chol);

    const std::size_t m = basis.mode_count;
    EigenSensitivity eigsens;
    eigsens.lam_theta.assign(m, 0.0);
    eigsens.z_theta = Matrix(basis.snapshot_count, m);
    for (std::size_t k = 0; k < m; ++k) {
        try {
            Vector col;
            double lam_theta = 0.0;
            eigen_sensitivity_mode(basis.corr, bundle.k_theta, basis.eig, k, kNullTol, kGapTol,
                                   lam_theta, col);
            eigsens.lam_theta[k] = lam_theta;
            eigsens.z_theta.set_column(k, col);
        } catch (const NearDegenerateEigenvalue&) {
            if (policy == DegeneracyPolicy::Strict) throw;
            bundle.dropped_modes.push_back(k);
        }
    }

    bundle.lam_theta = eigsens.lam_theta;
    bundle.z_theta = eigsens.z_theta;
    bundle.psi_theta = mode_sensitivity(basis, bundle.y_theta, eigsens);
    for (std::size_t k : bundle.dropped_modes)
        for (std::size_t i = 0; i < bundle.psi_theta.rows(); ++i) bundle.psi_theta(i, k) = 0.0;
    return bundle;
}

namespace {

// Modified Gram-Schmidt in the mass inner product with one re-orthogonalization
// pass; returns indices of dropped columns.
Matrix orthonormalize_columns(const Matrix& candidates, const FemOperators& fem,
                              std::vector<std::size_t>& dropped) {
    const std::size_t n = candidates.rows();
    std::vector<Vector> kept;
    dropped.clear();
    for (std::size_t c = 0; c < candidates.cols(); ++c) {
        Vector v = candidates.column(c);
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& u : kept) {
                const double proj = mass_inner(fem, u, v);
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * u[i];
            }
        }
        const double norm = mass_norm(fem, v);
        if (norm < 1e-10) {
            dropped.push_back(c);
            continue;
        }
        for (double& x : v) x /= norm;
        kept.push_back(std::move(v));
    }
    Matrix out(n, kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) out.set_column(c, kept[c]);
    return out;
}

} // namespace

ImprovedBasis improve_basis(const PodBasis& basis, const SensitivityBundle& bundle, BasisKind kind,
                            double delta_theta, const FemOperators& fem, bool extrapolate_mean) {
    const std::size_t n = basis.modes.rows();
    const std::size_t m = basis.mode_count;
    if (bundle.psi_theta.rows() != n || bundle.psi_theta.cols() != m)
        throw DimMismatch("improve_basis: bundle does not match the basis");

    ImprovedBasis improved;
    improved.kind = kind;
    improved.delta_theta = delta_theta;
    improved.mean_flow = basis.mean_flow;
    if (extrapolate_mean) {
        const Vector shift = mean_flow(bundle.y_theta);
        for (std::size_t i = 0; i < n; ++i) improved.mean_flow[i] += delta_theta * shift[i];
    }

    std::vector<std::size_t> dropped;
    if (kind == BasisKind::Extrapolated) {
        Matrix candidates(n, m);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t i = 0; i < n; ++i)
                candidates(i, k) = basis.modes(i, k) + delta_theta * bundle.psi_theta(i, k);
        improved.modes = orthonormalize_columns(candidates, fem, dropped);
        if (improved.modes.cols() == 0)
            throw DegenerateBasis("improve_basis: every extrapolated column degenerated");
    } else {
        Matrix candidates(n, 2 * m);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t i = 0; i < n; ++i) {
                candidates(i, k) = basis.modes(i, k);
                candidates(i, m + k) = bundle.psi_theta(i, k);
            }
        improved.modes = orthonormalize_columns(candidates, fem, dropped);
        if (improved.modes.cols() == 0)
            throw DegenerateBasis("improve_basis: every expanded column degenerated");
        std::size_t sensitivity_kept = 0;
        for (std::size_t c = m; c < 2 * m; ++c) {
            bool was_dropped = false;
            for (std::size_t dc : dropped) was_dropped |= (dc == c);
            if (!was_dropped) ++sensitivity_kept;
        }
        if (sensitivity_kept == 0) {
            improved.modes = basis.modes;
            improved.degraded = true;
        }
    }
    return improved;
}

} // namespace mfsc
