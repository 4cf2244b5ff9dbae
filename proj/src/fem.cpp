#include "mfsc/fem.hpp"

#include <cmath>

#include "mfsc/errors.hpp"

namespace mfsc {

namespace {

// 3-point Gauss-Legendre on [-1, 1].
constexpr double kGaussX[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGaussW[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

} // namespace

Mesh1D Mesh1D::uniform(std::size_t intervals) {
    if (intervals < 3) throw InvalidMesh("mesh needs at least 3 intervals");
    Mesh1D mesh;
    mesh.n_interior = intervals - 1;
    mesh.h = 1.0 / static_cast<double>(intervals);
    mesh.nodes.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        mesh.nodes[i] = static_cast<double>(i) / static_cast<double>(intervals);
    return mesh;
}

std::function<double(double)> initial_condition_paper() {
    return [](double x) {
        return (std::exp(std::cos(5.0 * M_PI * x)) - 1.5) * std::sin(M_PI * x);
    };
}

std::function<double(double)> initial_condition_zero() {
    return [](double) { return 0.0; };
}

FemOperators assemble(const Mesh1D& mesh, double mu) {
    const std::size_t n = mesh.n_interior;
    if (n < 2) throw InvalidMesh("assemble: need at least 2 interior nodes");
    if (!(mu > 0.0)) throw InvalidMesh("assemble: viscosity must be positive");
    const double h = mesh.h;

    FemOperators ops;
    ops.mu = mu;
    ops.n = n;
    ops.h = h;

    ops.mass.diag.assign(n, 2.0 * h / 3.0);
    ops.mass.sub.assign(n - 1, h / 6.0);
    ops.mass.super.assign(n - 1, h / 6.0);

    ops.stiffness.diag.assign(n, 2.0 / h);
    ops.stiffness.sub.assign(n - 1, -1.0 / h);
    ops.stiffness.super.assign(n - 1, -1.0 / h);

    ops.advection.diag.assign(n, 0.0);
    ops.advection.sub.assign(n - 1, -0.5);
    ops.advection.super.assign(n - 1, 0.5);

    ops.chol = cholesky_tridiag(ops.mass);
    return ops;
}

Vector group_nonlinearity(const Vector& alpha, const FemOperators& ops) {
    if (alpha.size() != ops.n) throw DimMismatch("group_nonlinearity: state size mismatch");
    Vector squared(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) squared[i] = alpha[i] * alpha[i];
    return ops.advection * squared;
}

Vector assemble_load(const Mesh1D& mesh, const std::function<double(double)>& f) {
    const std::size_t n = mesh.n_interior;
    const double h = mesh.h;
    Vector load(n, 0.0);
    for (std::size_t e = 0; e <= n; ++e) {
        const double xl = mesh.nodes[e];
        for (int g = 0; g < 3; ++g) {
            const double x = xl + 0.5 * h * (1.0 + kGaussX[g]);
            const double w = 0.5 * h * kGaussW[g];
            const double fx = f(x);
            const double phi_right = (x - xl) / h; // basis of node e+1
            if (e + 1 <= n) load[e] += w * fx * phi_right;
            if (e >= 1) load[e - 1] += w * fx * (1.0 - phi_right);
        }
    }
    return load;
}

Vector initial_state(const std::function<double(double)>& u0, const FemOperators& ops,
                     const Mesh1D& mesh) {
    const Vector load = assemble_load(mesh, u0);
    return tridiag_solve(ops.mass, load);
}

Vector sigma_load(const ForcingSpec& spec, const Mesh1D& mesh) {
    const auto& sigma = spec.sigma;
    return assemble_load(mesh, [&](double x) { return sigma(x); });
}

Vector load_vector(const RandomPoint& point, const ForcingSpec& spec, double t,
                   const Mesh1D& mesh) {
    // The amplitude integrals are time-independent; only the temporal factor
    // changes between calls.
    const double temporal = forcing_temporal(point, spec, t);
    Vector load = sigma_load(spec, mesh);
    for (double& v : load) v *= temporal;
    return load;
}

namespace {

// Tridiagonal Jacobian of the CN residual at state alpha:
// mass + dt/2 * (mu*stiffness + advection*diag(alpha)).
Tridiagonal cn_jacobian(const FemOperators& ops, const Vector& alpha, double half_dt) {
    Tridiagonal j;
    const std::size_t n = ops.n;
    j.diag.resize(n);
    j.sub.resize(n - 1);
    j.super.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        j.diag[i] = ops.mass.diag[i] + half_dt * ops.mu * ops.stiffness.diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        j.sub[i] = ops.mass.sub[i] +
                   half_dt * (ops.mu * ops.stiffness.sub[i] + ops.advection.sub[i] * alpha[i]);
        j.super[i] = ops.mass.super[i] +
                     half_dt * (ops.mu * ops.stiffness.super[i] + ops.advection.super[i] * alpha[i + 1]);
    }
    return j;
}

} // namespace

Trajectory solve_gfe(const RandomPoint& point, const GfeConfig& cfg) {
    if (cfg.steps < 1) throw BadCount("solve_gfe: need at least one time step");
    if (point.dim() != cfg.spec.dim) throw DimMismatch("solve_gfe: point dimension mismatch");
    const FemOperators ops = assemble(cfg.mesh, cfg.mu);
    const std::size_t n = ops.n;
    const std::size_t steps = cfg.steps;
    const double T = cfg.spec.horizon;
    const double dt = T / static_cast<double>(steps);
    const double half_dt = 0.5 * dt;

    Trajectory traj;
    traj.point = point;
    traj.intervals = cfg.mesh.intervals();
    traj.mu = cfg.mu;
    traj.times.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        traj.times[k] = T * static_cast<double>(k) / static_cast<double>(steps);
    traj.times.back() = T; // keep the final level exactly on the horizon

    traj.states.reserve(steps + 1);
    traj.states.push_back(initial_state(cfg.u0, ops, cfg.mesh));

    const Vector amplitude = sigma_load(cfg.spec, cfg.mesh);
    auto load_at = [&](double t) {
        Vector load = amplitude;
        const double temporal = forcing_temporal(point, cfg.spec, t);
        for (double& v : load) v *= temporal;
        return load;
    };

    Vector load_now = load_at(0.0);
    for (std::size_t step = 0; step < steps; ++step) {
        const Vector& alpha = traj.states.back();
        const Vector load_next = load_at(traj.times[step + 1]);

        // g = M*alpha + dt/2 * (F(alpha, t_n) + V(t_{n+1}))
        Vector g = ops.mass * alpha;
        {
            Vector f_now = ops.stiffness * alpha;
            const Vector gn = group_nonlinearity(alpha, ops);
            for (std::size_t i = 0; i < n; ++i)
                g[i] += half_dt * (-ops.mu * f_now[i] - 0.5 * gn[i] + load_now[i] + load_next[i]);
        }

        Vector next = alpha;
        bool converged = false;
        for (int iter = 0; iter < 25; ++iter) {
            Vector residual = ops.mass * next;
            const Vector a_next = ops.stiffness * next;
            const Vector gn_next = group_nonlinearity(next, ops);
            for (std::size_t i = 0; i < n; ++i)
                residual[i] += half_dt * (ops.mu * a_next[i] + 0.5 * gn_next[i]) - g[i];
            if (norm_inf(residual) <= 1e-12) {
                converged = true;
                break;
            }
            const Tridiagonal jac = cn_jacobian(ops, next, half_dt);
            const Vector delta = tridiag_solve(jac, residual);
            for (std::size_t i = 0; i < n; ++i) next[i] -= delta[i];
        }
        if (!converged)
            throw NewtonDivergence("solve_gfe: Newton stalled at step " + std::to_string(step + 1),
                                   step + 1);
        traj.states.push_back(std::move(next));
        load_now = load_next;
    }
    return traj;
}

double mass_inner(const FemOperators& ops, const Vector& a, const Vector& b) {
    return dot(a, ops.mass * b);
}

double mass_norm(const FemOperators& ops, const Vector& a) {
    return std::sqrt(std::max(0.0, mass_inner(ops, a, a)));
}

double relative_l2_error(const FemOperators& ops, const Vector& approx, const Vector& reference) {
    Vector diff(approx.size());
    for (std::size_t i = 0; i < approx.size(); ++i) diff[i] = approx[i] - reference[i];
    const double den = mass_norm(ops, reference);
    const double num = mass_norm(ops, diff);
    return den > 0.0 ? num / den : num;
}

} // namespace mfsc
