#ifndef MFSC_MULTIFID_HPP
#define MFSC_MULTIFID_HPP

#include <cstddef>
#include <vector>

#include "mfsc/fem.hpp"
#include "mfsc/pod.hpp"
#include "mfsc/sparse_grid.hpp"

namespace mfsc {

struct CacheEntry {
    RandomPoint point;
    Trajectory trajectory;
    PodBasis basis;
};

// High-fidelity solves completed so far; donors for nodes within the
// eta-neighborhood B_eta (strict max-norm ball).
struct SolveCache {
    std::vector<CacheEntry> entries;
    double eta = 0.0;
};

// Nearest entry with max-coordinate distance < eta, minimizing Euclidean
// distance; ties resolve to the earliest insertion.  Returns nullptr on miss.
const CacheEntry* neighborhood_lookup(const SolveCache& cache, const RandomPoint& zeta);

enum class SolverTag { HighFidelity, Reduced };

// Per-node results of one sweep over the plan.
struct NodeSolutionSet {
    std::vector<Vector> fields; // lifted solution at the final time, one per node
    std::vector<SolverTag> tags;
    std::size_t fe_call_count = 0;
};

struct RunReport {
    double eta = 0.0;
    std::size_t fe_calls = 0;
    std::size_t rom_calls = 0;
    NodeSolutionSet solutions;
    Vector mean_field;          // E[u](T, .) on the interior nodes
    Vector second_moment_field; // E[u^2](T, .)
    double seconds = 0.0;
};

struct MultifidConfig {
    GfeConfig gfe;
    std::size_t snapshots = 0; // S
    std::size_t modes = 0;     // M (donor basis size, extrapolated kind)
};

// The two-step procedure: visit nodes in plan order; reuse the nearest cached
// high-fidelity solution within eta via an extrapolated-basis ROM
// (delta_theta = 1 lands on the target point), otherwise run the GFE solver
// and cache it.  Moments come from the plan weights.
RunReport run_multifid(const SparseGridPlan& plan, double eta, const MultifidConfig& cfg);

// High-fidelity solve at every node; the error baseline.
RunReport reference_full_run(const SparseGridPlan& plan, const MultifidConfig& cfg);

struct MomentErrors {
    double mean_rel = 0.0;
    double second_moment_rel = 0.0;
    double variance_rel = 0.0;
};

// Relative mass-weighted L2 errors of the moment fields against a reference.
MomentErrors compare_reports(const RunReport& run, const RunReport& reference,
                             const FemOperators& ops);

} // namespace mfsc

#endif
