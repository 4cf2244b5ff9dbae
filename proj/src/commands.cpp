#include "mfsc/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "mfsc/errors.hpp"
#include "mfsc/io.hpp"
#include "mfsc/mc.hpp"
#include "mfsc/multifid.hpp"
#include "mfsc/pod.hpp"
#include "mfsc/sensitivity.hpp"
#include "mfsc/sparse_grid.hpp"

namespace mfsc {

using nlohmann::json;

namespace {

std::string out_path(const StudyConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << doc.dump(2) << "\n";
}

RandomPoint resolve_xi(const StudyConfig& cfg) {
    if (cfg.xi) return RandomPoint{*cfg.xi};
    return sample_point(cfg.seed, 0, cfg.dim);
}

RandomPoint resolve_zeta(const StudyConfig& cfg, const RandomPoint& fallback) {
    if (cfg.zeta) return RandomPoint{*cfg.zeta};
    return fallback;
}

MultifidConfig make_multifid(const StudyConfig& cfg) {
    MultifidConfig mf;
    mf.gfe = cfg.make_gfe();
    mf.snapshots = cfg.snapshots;
    mf.modes = cfg.modes;
    return mf;
}

json errors_to_json(const MomentErrors& errors) {
    return json{{"expectation_l2_error", errors.mean_rel},
                {"second_moment_l2_error", errors.second_moment_rel},
                {"variance_l2_error", errors.variance_rel}};
}

} // namespace

int cmd_gfe(const StudyConfig& cfg) {
    const GfeConfig gfe = cfg.make_gfe();
    const RandomPoint xi = resolve_xi(cfg);
    const Trajectory traj = solve_gfe(xi, gfe);
    write_trajectory_csv(out_path(cfg, "trajectory.csv"), traj);

    json summary{{"command", "gfe"},
                 {"xi", xi.coords},
                 {"intervals", cfg.intervals},
                 {"steps", cfg.steps},
                 {"files", {"trajectory.csv"}}};
    write_json(out_path(cfg, "gfe_summary.json"), summary);
    return 0;
}

int cmd_rom(const StudyConfig& cfg) {
    const GfeConfig gfe = cfg.make_gfe();
    const FemOperators fem = assemble(gfe.mesh, gfe.mu);
    const RandomPoint xi = resolve_xi(cfg);
    const RandomPoint zeta = resolve_zeta(cfg, xi);

    const Trajectory traj = solve_gfe(xi, gfe);
    const PodBasis basis = build_pod_basis(traj, fem, cfg.snapshots, cfg.modes);
    write_modes_csv(out_path(cfg, "modes.csv"), gfe.mesh, basis.modes, basis.mean_flow);

    const RomOperators rom = assemble_rom(basis, fem, gfe.mu);
    const RomResult result = solve_rom(zeta, rom, basis, gfe);

    Trajectory lifted;
    lifted.times = result.times;
    lifted.states = result.lifted;
    lifted.point = zeta;
    lifted.intervals = cfg.intervals;
    lifted.mu = cfg.mu;
    write_trajectory_csv(out_path(cfg, "rom_trajectory.csv"), lifted);

    const Trajectory truth = solve_gfe(zeta, gfe);
    const double err = relative_l2_error(fem, result.lifted.back(), truth.states.back());

    json summary{{"command", "rom"},
                 {"xi", xi.coords},
                 {"zeta", zeta.coords},
                 {"modes", basis.mode_count},
                 {"snapshots", basis.snapshot_count},
                 {"final_time_l2_error_vs_gfe", err},
                 {"files", {"modes.csv", "rom_trajectory.csv"}}};
    write_json(out_path(cfg, "rom_summary.json"), summary);
    return 0;
}

int cmd_sens_check(const StudyConfig& cfg) {
    const GfeConfig gfe = cfg.make_gfe();
    const FemOperators fem = assemble(gfe.mesh, gfe.mu);
    const RandomPoint xi = resolve_xi(cfg);
    RandomPoint other = cfg.zeta ? RandomPoint{*cfg.zeta} : sample_point(cfg.seed, 1, cfg.dim);

    // Normalized direction: theta = 1 is one unit along (zeta - xi)/|zeta - xi|.
    Vector direction(cfg.dim);
    for (std::size_t k = 0; k < cfg.dim; ++k) direction[k] = other.coords[k] - xi.coords[k];
    const double dir_norm = norm2(direction);
    if (dir_norm == 0.0) throw ConfigError("zeta: must differ from xi for sens-check");
    for (double& v : direction) v /= dir_norm;
    RandomPoint unit_target = xi;
    for (std::size_t k = 0; k < cfg.dim; ++k) unit_target.coords[k] += direction[k];

    const Trajectory traj = solve_gfe(xi, gfe);
    const PodBasis basis = build_pod_basis(traj, fem, cfg.snapshots, cfg.modes);
    const std::size_t big = std::min(2 * cfg.modes, numerical_rank(basis.eig));
    const PodBasis basis2m = build_pod_basis(traj, fem, cfg.snapshots, big);
    const SensitivityBundle bundle = build_sensitivity_bundle(basis, fem, gfe.spec, traj, unit_target);
    const ImprovedBasis expanded = improve_basis(basis, bundle, BasisKind::Expanded, 1.0, fem);

    // Per-mode FD-vs-analytic report along the study direction.
    {
        const double h = 1e-3;
        RandomPoint plus = xi, minus = xi;
        for (std::size_t k = 0; k < cfg.dim; ++k) {
            plus.coords[k] += h * direction[k];
            minus.coords[k] -= h * direction[k];
        }
        const PodBasis basis_p = build_pod_basis(solve_gfe(plus, gfe), fem, cfg.snapshots, cfg.modes);
        const PodBasis basis_m = build_pod_basis(solve_gfe(minus, gfe), fem, cfg.snapshots, cfg.modes);

        std::ofstream out(out_path(cfg, "sens_fd_report.csv"));
        out << "mode,lambda_rel_err,psi_rel_err\n";
        for (std::size_t k = 0; k < basis.mode_count; ++k) {
            const double fd_lam = (basis_p.eig.values[k] - basis_m.eig.values[k]) / (2.0 * h);
            const double lam_err =
                std::abs(fd_lam - bundle.lam_theta[k]) / std::max(std::abs(fd_lam), 1e-300);

            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < fem.n; ++i) {
                const double fd = (basis_p.modes(i, k) - basis_m.modes(i, k)) / (2.0 * h);
                num += (fd - bundle.psi_theta(i, k)) * (fd - bundle.psi_theta(i, k));
                den += fd * fd;
            }
            const double psi_err = std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
            out << k + 1 << ',' << format_double(lam_err) << ',' << format_double(psi_err) << "\n";
        }
    }

    // Improvement study: errors of each variant across theta in [-1/2, 1/2].
    std::ofstream out(out_path(cfg, "improvement_errors.csv"));
    out << "theta,pod_" << basis.mode_count << ",extrapolated_" << basis.mode_count << ",expanded_"
        << expanded.modes.cols() << ",pod_" << basis2m.mode_count << "\n";
    const int half_samples = 5;
    for (int s = -half_samples; s <= half_samples; ++s) {
        const double theta = 0.5 * static_cast<double>(s) / static_cast<double>(half_samples);
        RandomPoint target = xi;
        for (std::size_t k = 0; k < cfg.dim; ++k) target.coords[k] += theta * direction[k];
        const Trajectory truth = solve_gfe(target, gfe);
        const Vector& exact = truth.states.back();

        auto variant_error = [&](const Matrix& modes, const Vector& mean) {
            const RomOperators rom = assemble_rom_with_modes(modes, mean, fem, gfe.mu);
            const RomResult res = solve_rom_with_modes(target, rom, modes, mean, gfe);
            return relative_l2_error(fem, res.lifted.back(), exact);
        };

        const double err_pod = variant_error(basis.modes, basis.mean_flow);
        const ImprovedBasis extrapolated =
            improve_basis(basis, bundle, BasisKind::Extrapolated, theta, fem);
        const double err_ext = variant_error(extrapolated.modes, extrapolated.mean_flow);
        const double err_exp = variant_error(expanded.modes, expanded.mean_flow);
        const double err_pod2m = variant_error(basis2m.modes, basis2m.mean_flow);

        out << format_double(theta) << ',' << format_double(err_pod) << ','
            << format_double(err_ext) << ',' << format_double(err_exp) << ','
            << format_double(err_pod2m) << "\n";
    }

    json summary{{"command", "sens-check"},
                 {"xi", xi.coords},
                 {"direction", direction},
                 {"modes", basis.mode_count},
                 {"dropped_modes", bundle.dropped_modes},
                 {"files", {"improvement_errors.csv", "sens_fd_report.csv"}}};
    write_json(out_path(cfg, "sens_check_summary.json"), summary);
    return 0;
}

int cmd_collocate(const StudyConfig& cfg) {
    const SparseGridPlan plan = smolyak_plan(cfg.dim, cfg.level, cfg.map_bound);
    const MultifidConfig mf = make_multifid(cfg);
    const RunReport report = reference_full_run(plan, mf);

    write_plan_csv(out_path(cfg, "plan.csv"), plan);
    write_moments_csv(out_path(cfg, "collocate_moments.csv"), mf.gfe.mesh, report.mean_field,
                      report.second_moment_field);
    json summary{{"command", "collocate"},
                 {"dim", cfg.dim},
                 {"level", cfg.level},
                 {"map_bound", cfg.map_bound},
                 {"nodes", plan.node_count()},
                 {"fe_calls", report.fe_calls},
                 {"seconds", report.seconds},
                 {"files", {"plan.csv", "collocate_moments.csv"}}};
    write_json(out_path(cfg, "collocate_summary.json"), summary);
    return 0;
}

int cmd_multifid(const StudyConfig& cfg, std::optional<double> eta_opt) {
    const double eta = eta_opt.value_or(cfg.etas.front());
    if (!(eta > 0.0)) throw ConfigError("eta: must be positive");
    const SparseGridPlan plan = smolyak_plan(cfg.dim, cfg.level, cfg.map_bound);
    const MultifidConfig mf = make_multifid(cfg);
    const FemOperators fem = assemble(mf.gfe.mesh, mf.gfe.mu);

    const RunReport run = run_multifid(plan, eta, mf);
    const RunReport reference = reference_full_run(plan, mf);
    const MomentErrors errors = compare_reports(run, reference, fem);

    write_moments_csv(out_path(cfg, "multifid_moments.csv"), mf.gfe.mesh, run.mean_field,
                      run.second_moment_field);
    json summary{{"command", "multifid"},
                 {"eta", eta},
                 {"nodes", plan.node_count()},
                 {"fe_calls", run.fe_calls},
                 {"rom_calls", run.rom_calls},
                 {"errors_vs_reference", errors_to_json(errors)},
                 {"seconds", run.seconds},
                 {"files", {"multifid_moments.csv"}}};
    write_json(out_path(cfg, "multifid_summary.json"), summary);
    return 0;
}

int cmd_mc(const StudyConfig& cfg) {
    McConfig mc;
    mc.samples = cfg.mc_samples;
    mc.seed = cfg.seed;
    mc.gfe = cfg.make_gfe();
    const McMoments result = mc_moments(mc);
    write_mc_csv(out_path(cfg, "mc_moments.csv"), mc.gfe.mesh, result);

    json summary{{"command", "mc"},
                 {"samples", cfg.mc_samples},
                 {"seed", cfg.seed},
                 {"files", {"mc_moments.csv"}}};
    write_json(out_path(cfg, "mc_summary.json"), summary);
    return 0;
}

int cmd_table1(const StudyConfig& cfg) {
    const SparseGridPlan plan = smolyak_plan(cfg.dim, cfg.level, cfg.map_bound);
    const MultifidConfig mf = make_multifid(cfg);
    const FemOperators fem = assemble(mf.gfe.mesh, mf.gfe.mu);

    const RunReport reference = reference_full_run(plan, mf);
    write_moments_csv(out_path(cfg, "reference_moments.csv"), mf.gfe.mesh, reference.mean_field,
                      reference.second_moment_field);

    std::ofstream out(out_path(cfg, "table1.csv"));
    out << "eta,fe_calls,expectation_l2_error,second_moment_l2_error,variance_l2_error\n";
    json rows = json::array();
    for (double eta : cfg.etas) {
        const RunReport run = run_multifid(plan, eta, mf);
        const MomentErrors errors = compare_reports(run, reference, fem);
        out << format_double(eta) << ',' << run.fe_calls << ',' << format_double(errors.mean_rel)
            << ',' << format_double(errors.second_moment_rel) << ','
            << format_double(errors.variance_rel) << "\n";
        rows.push_back(json{{"eta", eta},
                            {"fe_calls", run.fe_calls},
                            {"rom_calls", run.rom_calls},
                            {"errors_vs_reference", errors_to_json(errors)},
                            {"seconds", run.seconds}});
        std::cerr << "table1: eta=" << eta << " fe_calls=" << run.fe_calls
                  << " mean_err=" << errors.mean_rel << "\n";
    }
    json summary{{"command", "table1"},
                 {"nodes", plan.node_count()},
                 {"level_convention", "per-dimension 1-based levels with i_1+...+i_d <= q+d"},
                 {"reference_fe_calls", reference.fe_calls},
                 {"rows", rows},
                 {"files", {"table1.csv", "reference_moments.csv"}}};
    write_json(out_path(cfg, "table1_summary.json"), summary);
    return 0;
}

} // namespace mfsc
