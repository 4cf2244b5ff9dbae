#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfsc/errors.hpp"
#include "mfsc/multifid.hpp"

using namespace mfsc;

namespace {

MultifidConfig small_config(std::size_t dim) {
    MultifidConfig cfg;
    cfg.gfe.mesh = Mesh1D::uniform(12);
    cfg.gfe.mu = 0.01;
    cfg.gfe.steps = 8;
    cfg.gfe.u0 = initial_condition_paper();
    cfg.gfe.spec = ForcingSpec{SpatialAmplitude::paper(), 0.8, dim, TemporalBasis::Trigonometric};
    cfg.snapshots = 9;
    cfg.modes = 4;
    return cfg;
}

CacheEntry entry_at(const Vector& coords) {
    CacheEntry e;
    e.point = RandomPoint{coords};
    return e;
}

} // namespace

TEST_CASE("neighborhood_lookup") {
    SolveCache cache;
    cache.eta = 1.0;

    SUBCASE("empty cache misses") {
        CHECK(neighborhood_lookup(cache, RandomPoint{{0.0, 0.0}}) == nullptr);
    }
    SUBCASE("one entry inside the ball is found") {
        cache.entries.push_back(entry_at({0.5, 0.5}));
        const CacheEntry* hit = neighborhood_lookup(cache, RandomPoint{{0.0, 0.0}});
        REQUIRE(hit != nullptr);
        CHECK(hit->point.coords[0] == 0.5);
    }
    SUBCASE("the ball is strict") {
        cache.entries.push_back(entry_at({1.0, 0.0}));
        CHECK(neighborhood_lookup(cache, RandomPoint{{0.0, 0.0}}) == nullptr);
    }
    SUBCASE("the closest Euclidean candidate wins") {
        cache.entries.push_back(entry_at({0.3, 0.0}));  // distance 0.3
        cache.entries.push_back(entry_at({0.15, 0.13})); // distance ~0.199
        const CacheEntry* hit = neighborhood_lookup(cache, RandomPoint{{0.0, 0.0}});
        REQUIRE(hit != nullptr);
        CHECK(hit->point.coords[0] == doctest::Approx(0.15));
    }
    SUBCASE("ties resolve to the earliest insertion") {
        cache.entries.push_back(entry_at({0.2, 0.0}));
        cache.entries.push_back(entry_at({-0.2, 0.0}));
        const CacheEntry* hit = neighborhood_lookup(cache, RandomPoint{{0.0, 0.0}});
        REQUIRE(hit != nullptr);
        CHECK(hit->point.coords[0] == doctest::Approx(0.2));
    }
}

TEST_CASE("multifidelity sweep limit behavior") {
    const MultifidConfig cfg = small_config(2);
    const SparseGridPlan plan = smolyak_plan(2, 2, 4.0);
    const FemOperators ops = assemble(cfg.gfe.mesh, cfg.gfe.mu);

    SUBCASE("an eta below the minimum node distance reproduces the reference") {
        const double eta = 0.5 * min_pairwise_distance(plan);
        const RunReport run = run_multifid(plan, eta, cfg);
        const RunReport reference = reference_full_run(plan, cfg);

        CHECK(run.fe_calls == plan.node_count());
        CHECK(run.rom_calls == 0);
        CHECK(reference.fe_calls == plan.node_count());
        for (SolverTag tag : run.solutions.tags) CHECK(tag == SolverTag::HighFidelity);

        const MomentErrors errors = compare_reports(run, reference, ops);
        CHECK(errors.mean_rel <= 1e-12);
        CHECK(errors.second_moment_rel <= 1e-12);
        for (std::size_t j = 0; j < plan.node_count(); ++j)
            for (std::size_t i = 0; i < ops.n; ++i)
                CHECK(run.solutions.fields[j][i] == reference.solutions.fields[j][i]);
    }
    SUBCASE("a huge eta needs exactly one high-fidelity call") {
        const RunReport run = run_multifid(plan, 16.0, cfg);
        CHECK(run.fe_calls == 1);
        CHECK(run.rom_calls == plan.node_count() - 1);
        CHECK(run.solutions.tags.front() == SolverTag::HighFidelity);
    }
}

TEST_CASE("runs are deterministic") {
    const MultifidConfig cfg = small_config(2);
    const SparseGridPlan plan = smolyak_plan(2, 2, 4.0);
    const RunReport a = run_multifid(plan, 2.0, cfg);
    const RunReport b = run_multifid(plan, 2.0, cfg);
    CHECK(a.fe_calls == b.fe_calls);
    CHECK(a.rom_calls == b.rom_calls);
    for (std::size_t j = 0; j < plan.node_count(); ++j) {
        CHECK(a.solutions.tags[j] == b.solutions.tags[j]);
        for (std::size_t i = 0; i < a.solutions.fields[j].size(); ++i)
            CHECK(a.solutions.fields[j][i] == b.solutions.fields[j][i]);
    }
}

TEST_CASE("every reduced node has an earlier high-fidelity donor within eta") {
    const MultifidConfig cfg = small_config(2);
    const SparseGridPlan plan = smolyak_plan(2, 3, 4.0);
    const double eta = 2.0;
    const RunReport run = run_multifid(plan, eta, cfg);
    CHECK(run.fe_calls + run.rom_calls == plan.node_count());
    CHECK(run.solutions.fe_call_count == run.fe_calls);

    for (std::size_t j = 0; j < plan.node_count(); ++j) {
        if (run.solutions.tags[j] != SolverTag::Reduced) continue;
        bool covered = false;
        for (std::size_t i = 0; i < j; ++i) {
            if (run.solutions.tags[i] != SolverTag::HighFidelity) continue;
            double dist = 0.0;
            for (std::size_t k = 0; k < plan.dim; ++k)
                dist = std::max(dist, std::abs(plan.nodes[i][k] - plan.nodes[j][k]));
            covered |= (dist < eta);
        }
        CHECK(covered);
    }
}

TEST_CASE("moments combine node fields with the plan weights") {
    const MultifidConfig cfg = small_config(2);
    const SparseGridPlan plan = smolyak_plan(2, 2, 4.0);
    const RunReport reference = reference_full_run(plan, cfg);
    const FemOperators ops = assemble(cfg.gfe.mesh, cfg.gfe.mu);

    Vector mean(ops.n, 0.0), second(ops.n, 0.0);
    for (std::size_t j = 0; j < plan.node_count(); ++j)
        for (std::size_t i = 0; i < ops.n; ++i) {
            mean[i] += plan.weights[j] * reference.solutions.fields[j][i];
            second[i] += plan.weights[j] * reference.solutions.fields[j][i] *
                         reference.solutions.fields[j][i];
        }
    for (std::size_t i = 0; i < ops.n; ++i) {
        CHECK(reference.mean_field[i] == doctest::Approx(mean[i]).epsilon(1e-14));
        CHECK(reference.second_moment_field[i] == doctest::Approx(second[i]).epsilon(1e-14));
    }
}

TEST_CASE("dimension mismatches are rejected") {
    const MultifidConfig cfg = small_config(3);
    const SparseGridPlan plan = smolyak_plan(2, 2, 4.0);
    CHECK_THROWS_AS(run_multifid(plan, 1.0, cfg), DimMismatch);
}
