#ifndef MFSC_IO_HPP
#define MFSC_IO_HPP

#include <string>

#include "mfsc/fem.hpp"
#include "mfsc/linalg.hpp"
#include "mfsc/mc.hpp"
#include "mfsc/sparse_grid.hpp"

namespace mfsc {

// All floating-point output uses 17 significant digits so files round-trip
// exactly.
std::string format_double(double v);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// x, psi_1..psi_M, U with boundary rows included (modes vanish there).
void write_modes_csv(const std::string& path, const Mesh1D& mesh, const Matrix& modes,
                     const Vector& mean);

// x, mean, second_moment.
void write_moments_csv(const std::string& path, const Mesh1D& mesh, const Vector& mean,
                       const Vector& second_moment);

// x, mean, second_moment, se_mean.
void write_mc_csv(const std::string& path, const Mesh1D& mesh, const McMoments& mc);

// node_index, xi_1..xi_d, weight.
void write_plan_csv(const std::string& path, const SparseGridPlan& plan);

} // namespace mfsc

#endif
