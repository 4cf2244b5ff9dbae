#include "mfsc/multifid.hpp"

#include <chrono>
#include <cmath>

#include "mfsc/errors.hpp"
#include "mfsc/sensitivity.hpp"

namespace mfsc {

const CacheEntry* neighborhood_lookup(const SolveCache& cache, const RandomPoint& zeta) {
    const CacheEntry* best = nullptr;
    double best_dist2 = 0.0;
    for (const CacheEntry& entry : cache.entries) {
        double max_coord = 0.0;
        double dist2 = 0.0;
        for (std::size_t k = 0; k < zeta.dim(); ++k) {
            const double diff = entry.point.coords[k] - zeta.coords[k];
            max_coord = std::max(max_coord, std::abs(diff));
            dist2 += diff * diff;
        }
        if (max_coord >= cache.eta) continue;
        if (best == nullptr || dist2 < best_dist2) {
            best = &entry;
            best_dist2 = dist2;
        }
    }
    return best;
}

namespace {

RunReport sweep(const SparseGridPlan& plan, double eta, const MultifidConfig& cfg,
                bool enable_cache) {
    if (cfg.gfe.spec.dim != plan.dim)
        throw DimMismatch("run_multifid: forcing dimension differs from the plan");
    const auto start = std::chrono::steady_clock::now();

    const FemOperators fem = assemble(cfg.gfe.mesh, cfg.gfe.mu);
    const std::size_t n = fem.n;

    RunReport report;
    report.eta = eta;
    report.solutions.fields.reserve(plan.node_count());
    report.solutions.tags.reserve(plan.node_count());

    SolveCache cache;
    cache.eta = eta;

    for (std::size_t j = 0; j < plan.node_count(); ++j) {
        const RandomPoint zeta = plan.node_point(j);
        const CacheEntry* donor = enable_cache ? neighborhood_lookup(cache, zeta) : nullptr;
        try {
            if (donor != nullptr) {
                const SensitivityBundle bundle = build_sensitivity_bundle(
                    donor->basis, fem, cfg.gfe.spec, donor->trajectory, zeta);
                const ImprovedBasis improved =
                    improve_basis(donor->basis, bundle, BasisKind::Extrapolated, 1.0, fem);
                const RomOperators rom =
                    assemble_rom_with_modes(improved.modes, improved.mean_flow, fem, cfg.gfe.mu);
                const RomResult result =
                    solve_rom_with_modes(zeta, rom, improved.modes, improved.mean_flow, cfg.gfe);
                report.solutions.fields.push_back(result.lifted.back());
                report.solutions.tags.push_back(SolverTag::Reduced);
                ++report.rom_calls;
            } else {
                Trajectory traj = solve_gfe(zeta, cfg.gfe);
                report.solutions.fields.push_back(traj.states.back());
                report.solutions.tags.push_back(SolverTag::HighFidelity);
                ++report.fe_calls;
                if (enable_cache) {
                    PodBasis basis = build_pod_basis(traj, fem, cfg.snapshots, cfg.modes);
                    cache.entries.push_back(CacheEntry{zeta, std::move(traj), std::move(basis)});
                }
            }
        } catch (const Error& err) {
            throw Error("node " + std::to_string(j) + ": " + err.what());
        }
    }
    report.solutions.fe_call_count = report.fe_calls;

    report.mean_field.assign(n, 0.0);
    report.second_moment_field.assign(n, 0.0);
    for (std::size_t j = 0; j < plan.node_count(); ++j) {
        const double w = plan.weights[j];
        const Vector& field = report.solutions.fields[j];
        for (std::size_t i = 0; i < n; ++i) {
            report.mean_field[i] += w * field[i];
            report.second_moment_field[i] += w * field[i] * field[i];
        }
    }

    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace

RunReport run_multifid(const SparseGridPlan& plan, double eta, const MultifidConfig& cfg) {
    return sweep(plan, eta, cfg, eta > 0.0);
}

RunReport reference_full_run(const SparseGridPlan& plan, const MultifidConfig& cfg) {
    return sweep(plan, 0.0, cfg, false);
}

MomentErrors compare_reports(const RunReport& run, const RunReport& reference,
                             const FemOperators& ops) {
    MomentErrors errors;
    errors.mean_rel = relative_l2_error(ops, run.mean_field, reference.mean_field);
    errors.second_moment_rel =
        relative_l2_error(ops, run.second_moment_field, reference.second_moment_field);

    const std::size_t n = run.mean_field.size();
    Vector var_run(n), var_ref(n);
    for (std::size_t i = 0; i < n; ++i) {
        var_run[i] = run.second_moment_field[i] - run.mean_field[i] * run.mean_field[i];
        var_ref[i] = reference.second_moment_field[i] - reference.mean_field[i] * reference.mean_field[i];
    }
    errors.variance_rel = relative_l2_error(ops, var_run, var_ref);
    return errors;
}

} // namespace mfsc
