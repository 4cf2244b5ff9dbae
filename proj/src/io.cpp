#include "mfsc/io.hpp"

#include <cstdio>
#include <fstream>

#include "mfsc/errors.hpp"

namespace mfsc {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

} // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_output(path);
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << format_double(traj.times[k]);
        for (std::size_t i = 0; i < n; ++i) out << ',' << format_double(traj.states[k][i]);
        out << "\n";
    }
}

void write_modes_csv(const std::string& path, const Mesh1D& mesh, const Matrix& modes,
                     const Vector& mean) {
    std::ofstream out = open_output(path);
    const std::size_t m = modes.cols();
    out << "x";
    for (std::size_t k = 1; k <= m; ++k) out << ",psi_" << k;
    out << ",U\n";
    for (std::size_t node = 0; node < mesh.nodes.size(); ++node) {
        out << format_double(mesh.nodes[node]);
        const bool interior = node >= 1 && node + 1 < mesh.nodes.size();
        for (std::size_t k = 0; k < m; ++k)
            out << ',' << format_double(interior ? modes(node - 1, k) : 0.0);
        out << ',' << format_double(interior ? mean[node - 1] : 0.0) << "\n";
    }
}

void write_moments_csv(const std::string& path, const Mesh1D& mesh, const Vector& mean,
                       const Vector& second_moment) {
    std::ofstream out = open_output(path);
    out << "x,mean,second_moment\n";
    for (std::size_t node = 0; node < mesh.nodes.size(); ++node) {
        const bool interior = node >= 1 && node + 1 < mesh.nodes.size();
        out << format_double(mesh.nodes[node]) << ','
            << format_double(interior ? mean[node - 1] : 0.0) << ','
            << format_double(interior ? second_moment[node - 1] : 0.0) << "\n";
    }
}

void write_mc_csv(const std::string& path, const Mesh1D& mesh, const McMoments& mc) {
    std::ofstream out = open_output(path);
    out << "x,mean,second_moment,se_mean\n";
    for (std::size_t node = 0; node < mesh.nodes.size(); ++node) {
        const bool interior = node >= 1 && node + 1 < mesh.nodes.size();
        out << format_double(mesh.nodes[node]) << ','
            << format_double(interior ? mc.mean[node - 1] : 0.0) << ','
            << format_double(interior ? mc.second_moment[node - 1] : 0.0) << ','
            << format_double(interior ? mc.se_mean[node - 1] : 0.0) << "\n";
    }
}

void write_plan_csv(const std::string& path, const SparseGridPlan& plan) {
    std::ofstream out = open_output(path);
    out << "node_index";
    for (std::size_t k = 1; k <= plan.dim; ++k) out << ",xi_" << k;
    out << ",weight\n";
    for (std::size_t j = 0; j < plan.node_count(); ++j) {
        out << j;
        for (std::size_t k = 0; k < plan.dim; ++k) out << ',' << format_double(plan.nodes[j][k]);
        out << ',' << format_double(plan.weights[j]) << "\n";
    }
}

} // namespace mfsc
