#include "mfsc/pod.hpp"

#include <cmath>
#include <string>

#include "mfsc/errors.hpp"

namespace mfsc {

SnapshotSet build_snapshots(const Trajectory& traj, std::size_t count) {
    const std::size_t steps = traj.steps();
    if (count < 1 || count > steps)
        throw BadCount("build_snapshots: count must lie in [1, steps]");
    if (steps % count != 0)
        throw BadCount("build_snapshots: count must divide the step count");
    const std::size_t stride = steps / count;
    const std::size_t n = traj.states.front().size();

    SnapshotSet set;
    set.matrix = Matrix(n, count);
    set.times.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t level = (i + 1) * stride;
        set.times[i] = traj.times[level];
        set.matrix.set_column(i, traj.states[level]);
    }
    return set;
}

SymMatrix correlation(const Matrix& snapshots, const LowerBidiagonal& mass_chol) {
    if (snapshots.rows() != mass_chol.order())
        throw DimMismatch("correlation: snapshot rows must match the mass factor order");
    const std::size_t s = snapshots.cols();
    Matrix weighted(snapshots.rows(), s);
    for (std::size_t j = 0; j < s; ++j)
        weighted.set_column(j, lower_bidiag_transpose_apply(mass_chol, snapshots.column(j)));

    SymMatrix k(s);
    const double inv_s = 1.0 / static_cast<double>(s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = i; j < s; ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < snapshots.rows(); ++r) acc += weighted(r, i) * weighted(r, j);
            k.set(i, j, acc * inv_s);
        }
    }
    return k;
}

std::size_t numerical_rank(const EigDecomposition& eig) {
    if (eig.values.empty()) return 0;
    const double cutoff = kModeTol * std::max(eig.values.front(), 0.0);
    std::size_t rank = 0;
    for (double lam : eig.values)
        if (lam > cutoff) ++rank;
    return rank;
}

Matrix pod_modes(const Matrix& snapshots, const EigDecomposition& eig, std::size_t snapshot_count,
                 std::size_t mode_count) {
    if (mode_count < 1 || mode_count > eig.values.size())
        throw RankDeficient("pod_modes: requested mode count outside spectrum");
    if (mode_count > numerical_rank(eig))
        throw RankDeficient("pod_modes: requested " + std::to_string(mode_count) +
                            " modes but numerical rank is " + std::to_string(numerical_rank(eig)));
    const std::size_t n = snapshots.rows();
    const std::size_t s = snapshots.cols();
    Matrix psi(n, mode_count);
    for (std::size_t k = 0; k < mode_count; ++k) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(snapshot_count) * eig.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < s; ++j) acc += snapshots(i, j) * eig.vectors(j, k);
            psi(i, k) = acc * scale;
        }
    }
    return psi;
}

Vector mean_flow(const Matrix& snapshots) {
    const std::size_t n = snapshots.rows();
    const std::size_t s = snapshots.cols();
    if (s == 0) throw BadCount("mean_flow: empty snapshot set");
    Vector mean(n, 0.0);
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t i = 0; i < n; ++i) mean[i] += snapshots(i, j);
    const double inv_s = 1.0 / static_cast<double>(s);
    for (double& v : mean) v *= inv_s;
    return mean;
}

std::size_t quad_pack_size(std::size_t modes) { return modes * (modes + 1) / 2; }

namespace {

inline std::size_t pack_index(std::size_t j, std::size_t l, std::size_t modes) {
    // j <= l, 0-based; row-major over the upper triangle.
    return j * modes - j * (j - 1) / 2 + (l - j);
}

} // namespace

Vector quad_pack(const Vector& a, std::size_t modes) {
    if (a.size() != modes) throw DimMismatch("quad_pack: state size mismatch");
    Vector packed(quad_pack_size(modes));
    for (std::size_t j = 0; j < modes; ++j)
        for (std::size_t l = j; l < modes; ++l) packed[pack_index(j, l, modes)] = a[j] * a[l];
    return packed;
}

Matrix quad_pack_jacobian(const Vector& a, std::size_t modes) {
    Matrix jac(quad_pack_size(modes), modes);
    for (std::size_t j = 0; j < modes; ++j) {
        for (std::size_t l = j; l < modes; ++l) {
            const std::size_t row = pack_index(j, l, modes);
            jac(row, j) += a[l];
            jac(row, l) += a[j];
        }
    }
    return jac;
}

PodBasis build_pod_basis(const Trajectory& traj, const FemOperators& fem, std::size_t snapshot_count,
                         std::size_t mode_count, bool clamp_to_rank, bool include_initial) {
    PodBasis basis;
    if (include_initial) {
        if (snapshot_count < 2)
            throw BadCount("build_pod_basis: need at least 2 snapshots with the initial state");
        SnapshotSet tail = build_snapshots(traj, snapshot_count - 1);
        const std::size_t n = tail.matrix.rows();
        basis.snapshots = Matrix(n, snapshot_count);
        basis.snapshots.set_column(0, traj.states.front());
        for (std::size_t j = 0; j + 1 < snapshot_count; ++j)
            basis.snapshots.set_column(j + 1, tail.matrix.column(j));
        basis.snapshot_times.assign(1, traj.times.front());
        basis.snapshot_times.insert(basis.snapshot_times.end(), tail.times.begin(),
                                    tail.times.end());
        basis.includes_initial = true;
    } else {
        SnapshotSet set = build_snapshots(traj, snapshot_count);
        basis.snapshots = std::move(set.matrix);
        basis.snapshot_times = std::move(set.times);
        basis.includes_initial = false;
    }
    basis.snapshot_count = snapshot_count;
    basis.mean_flow = mean_flow(basis.snapshots);
    basis.corr = correlation(basis.snapshots, fem.chol);
    basis.eig = eig_sym(basis.corr);
    basis.source_point = traj.point;

    std::size_t m = mode_count;
    if (clamp_to_rank) {
        const std::size_t rank = numerical_rank(basis.eig);
        if (rank == 0) throw RankDeficient("build_pod_basis: snapshot set has rank zero");
        m = std::min(m, rank);
    }
    basis.mode_count = m;
    basis.modes = pod_modes(basis.snapshots, basis.eig, snapshot_count, m);
    return basis;
}

namespace {

Matrix gamma_hat_matrix(const Matrix& gamma) {
    const std::size_t n = gamma.rows();
    const std::size_t m = gamma.cols();
    Matrix ghat(n, quad_pack_size(m));
    for (std::size_t row = 0; row < n; ++row) {
        std::size_t col = 0;
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t l = j; l < m; ++l) {
                const double factor = (j == l) ? 1.0 : 2.0;
                ghat(row, col++) = factor * gamma(row, j) * gamma(row, l);
            }
        }
    }
    return ghat;
}

Matrix apply_tridiag_columns(const Tridiagonal& op, const Matrix& cols) {
    Matrix out(cols.rows(), cols.cols());
    for (std::size_t j = 0; j < cols.cols(); ++j) out.set_column(j, op * cols.column(j));
    return out;
}

} // namespace

RomOperators assemble_rom_with_modes(const Matrix& modes, const Vector& mean, const FemOperators& fem,
                                     double mu) {
    if (modes.rows() != fem.n) throw MeshMismatch("assemble_rom: basis mesh differs from operators");
    if (mean.size() != fem.n) throw MeshMismatch("assemble_rom: mean flow size mismatch");

    RomOperators rom;
    rom.modes = modes.cols();
    rom.n_fe = fem.n;
    rom.gamma = modes; // hat functions interpolate: node values are the coefficients
    rom.gamma_hat = gamma_hat_matrix(rom.gamma);

    const Matrix psi_t = transpose(modes);
    rom.mass_r = psi_t * apply_tridiag_columns(fem.mass, modes);

    // mu * psi^T A psi + Gamma^T N diag(U) Gamma
    Matrix lin = psi_t * apply_tridiag_columns(fem.stiffness, modes);
    for (std::size_t i = 0; i < lin.rows(); ++i)
        for (std::size_t j = 0; j < lin.cols(); ++j) lin(i, j) *= mu;
    Matrix u_gamma(fem.n, rom.modes);
    for (std::size_t i = 0; i < fem.n; ++i)
        for (std::size_t j = 0; j < rom.modes; ++j) u_gamma(i, j) = mean[i] * rom.gamma(i, j);
    rom.lin_r = lin + psi_t * apply_tridiag_columns(fem.advection, u_gamma);

    rom.nhat = psi_t * apply_tridiag_columns(fem.advection, rom.gamma_hat);

    // Forcing-independent load: 1/2 Gamma^T N (U.*U) + mu psi^T A U.
    Vector u_sq(fem.n);
    for (std::size_t i = 0; i < fem.n; ++i) u_sq[i] = mean[i] * mean[i];
    Vector grouped = fem.advection * u_sq;
    Vector diffusion = fem.stiffness * mean;
    rom.load_const.assign(rom.modes, 0.0);
    for (std::size_t k = 0; k < rom.modes; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < fem.n; ++i)
            acc += modes(i, k) * (0.5 * grouped[i] + mu * diffusion[i]);
        rom.load_const[k] = acc;
    }
    return rom;
}

RomOperators assemble_rom(const PodBasis& basis, const FemOperators& fem, double mu) {
    return assemble_rom_with_modes(basis.modes, basis.mean_flow, fem, mu);
}

RomResult solve_rom_with_modes(const RandomPoint& zeta, const RomOperators& rom, const Matrix& modes,
                               const Vector& mean, const GfeConfig& cfg) {
    if (zeta.dim() != cfg.spec.dim) throw DimMismatch("solve_rom: point dimension mismatch");
    if (rom.n_fe != cfg.mesh.n_interior) throw MeshMismatch("solve_rom: mesh differs from operators");
    const FemOperators fem = assemble(cfg.mesh, cfg.mu);
    const std::size_t m = rom.modes;
    const std::size_t steps = cfg.steps;
    const double T = cfg.spec.horizon;
    const double dt = T / static_cast<double>(steps);
    const double half_dt = 0.5 * dt;

    // a(0) = psi^T M (alpha_0 - U)
    const Vector alpha0 = initial_state(cfg.u0, fem, cfg.mesh);
    Vector v0(fem.n);
    for (std::size_t i = 0; i < fem.n; ++i) v0[i] = alpha0[i] - mean[i];
    const Vector mv0 = fem.mass * v0;
    Vector a0(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < fem.n; ++i) acc += modes(i, k) * mv0[i];
        a0[k] = acc;
    }
    // mass_r is the identity only for orthonormal modes; solve in general.
    a0 = lu_solve(rom.mass_r, a0);

    // V(t) = load_const - psi^T [(g_d(t,.), b_i)]; the amplitude projection is
    // time-independent.
    const Vector amplitude = sigma_load(cfg.spec, cfg.mesh);
    Vector projected_amplitude(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rom.n_fe; ++i) acc += modes(i, k) * amplitude[i];
        projected_amplitude[k] = acc;
    }
    auto reduced_load = [&](double t) {
        const double temporal = forcing_temporal(zeta, cfg.spec, t);
        Vector v = rom.load_const;
        for (std::size_t k = 0; k < m; ++k) v[k] -= temporal * projected_amplitude[k];
        return v;
    };

    RomResult result;
    result.times.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        result.times[k] = T * static_cast<double>(k) / static_cast<double>(steps);
    result.times.back() = T;

    auto lift = [&](const Vector& a) {
        Vector u(mean);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t i = 0; i < rom.n_fe; ++i) u[i] += modes(i, k) * a[k];
        return u;
    };

    result.reduced.reserve(steps + 1);
    result.lifted.reserve(steps + 1);
    result.reduced.push_back(a0);
    result.lifted.push_back(lift(a0));

    Vector vload_now = reduced_load(0.0);
    for (std::size_t step = 0; step < steps; ++step) {
        const Vector& a = result.reduced.back();
        const Vector vload_next = reduced_load(result.times[step + 1]);

        // g = M a + dt/2 (F(a, t_n) - V(t_{n+1}))
        Vector g = rom.mass_r * a;
        {
            const Vector f_now = rom.lin_r * a;
            const Vector quad = rom.nhat * quad_pack(a, m);
            for (std::size_t k = 0; k < m; ++k)
                g[k] += half_dt * (-f_now[k] - 0.5 * quad[k] - vload_now[k] - vload_next[k]);
        }

        Vector next = a;
        bool converged = false;
        for (int iter = 0; iter < 25; ++iter) {
            Vector residual = rom.mass_r * next;
            const Vector lin_next = rom.lin_r * next;
            const Vector quad_next = rom.nhat * quad_pack(next, m);
            for (std::size_t k = 0; k < m; ++k)
                residual[k] += half_dt * (lin_next[k] + 0.5 * quad_next[k]) - g[k];
            if (norm_inf(residual) <= 1e-12) {
                converged = true;
                break;
            }
            // J = mass_r + dt/2 (lin_r + 1/2 nhat dpack/da)
            const Matrix pack_jac = quad_pack_jacobian(next, m);
            Matrix jac = rom.mass_r;
            const Matrix quad_jac = rom.nhat * pack_jac;
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < m; ++c)
                    jac(r, c) += half_dt * (rom.lin_r(r, c) + 0.5 * quad_jac(r, c));
            const Vector delta = lu_solve(jac, residual);
            for (std::size_t k = 0; k < m; ++k) next[k] -= delta[k];
        }
        if (!converged)
            throw NewtonDivergence("solve_rom: Newton stalled at step " + std::to_string(step + 1),
                                   step + 1);
        result.lifted.push_back(lift(next));
        result.reduced.push_back(std::move(next));
        vload_now = vload_next;
    }
    return result;
}

RomResult solve_rom(const RandomPoint& zeta, const RomOperators& rom, const PodBasis& basis,
                    const GfeConfig& cfg) {
    return solve_rom_with_modes(zeta, rom, basis.modes, basis.mean_flow, cfg);
}

} // namespace mfsc
