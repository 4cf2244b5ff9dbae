#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "mfsc/errors.hpp"
#include "mfsc/sparse_grid.hpp"

using namespace mfsc;

namespace {

// Test-only difference-form Smolyak evaluator: sum over |i| <= q + d of
// tensor products of Delta_i = I_i - I_{i-1}, with plain tensor-Lagrange
// interpolation of f.  Independent of the production combination path.
double tensor_interp(const std::vector<std::size_t>& levels, double map_bound,
                     const std::function<double(const Vector&)>& f, const Vector& y) {
    const std::size_t d = levels.size();
    std::vector<Rule1D> rules(d);
    std::vector<Vector> cards(d);
    for (std::size_t k = 0; k < d; ++k) {
        rules[k] = cc_rule(levels[k]);
        const std::size_t m = rules[k].count();
        cards[k].assign(m, 0.0);
        if (m == 1) {
            cards[k][0] = 1.0;
            continue;
        }
        // Plain Lagrange products (the slow textbook formula).
        for (std::size_t j = 0; j < m; ++j) {
            double prod = 1.0;
            for (std::size_t l = 0; l < m; ++l) {
                if (l == j) continue;
                prod *= (y[k] - rules[k].points[l]) / (rules[k].points[j] - rules[k].points[l]);
            }
            cards[k][j] = prod;
        }
    }
    double acc = 0.0;
    std::vector<std::size_t> digit(d, 0);
    while (true) {
        double prod = 1.0;
        Vector node(d);
        for (std::size_t k = 0; k < d; ++k) {
            prod *= cards[k][digit[k]];
            node[k] = map_bound * rules[k].points[digit[k]];
        }
        acc += prod * f(node);
        std::size_t k = d;
        while (k-- > 0) {
            if (++digit[k] < rules[k].count()) break;
            digit[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1)) break;
    }
    return acc;
}

void all_multi_indices(std::size_t dim, std::size_t budget, std::vector<std::size_t>& current,
                       std::vector<std::vector<std::size_t>>& out) {
    if (current.size() == dim) {
        out.push_back(current);
        return;
    }
    const std::size_t left = dim - current.size() - 1;
    for (std::size_t i = 1; i + left <= budget; ++i) {
        current.push_back(i);
        all_multi_indices(dim, budget - i, current, out);
        current.pop_back();
    }
}

double difference_form(std::size_t dim, std::size_t level, double map_bound,
                       const std::function<double(const Vector&)>& f, const Vector& y) {
    const std::size_t total = level + dim;
    std::vector<std::vector<std::size_t>> indices;
    std::vector<std::size_t> current;
    all_multi_indices(dim, total, current, indices);

    double acc = 0.0;
    for (const auto& idx : indices) {
        // Expand the Delta product into up to 2^d tensor interpolants.
        for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
            std::vector<std::size_t> lowered = idx;
            int sign = 1;
            bool skip = false;
            for (std::size_t k = 0; k < dim; ++k) {
                if (mask & (std::size_t{1} << k)) {
                    sign = -sign;
                    if (lowered[k] == 1) {
                        skip = true;
                        break;
                    }
                    lowered[k] -= 1;
                }
            }
            if (!skip) acc += sign * tensor_interp(lowered, map_bound, f, y);
        }
    }
    return acc;
}

Vector values_at_nodes(const SparseGridPlan& plan, const std::function<double(const Vector&)>& f) {
    Vector values(plan.node_count());
    for (std::size_t j = 0; j < plan.node_count(); ++j) values[j] = f(plan.nodes[j]);
    return values;
}

} // namespace

TEST_CASE("cc_rule levels") {
    SUBCASE("level 1 is the midpoint rule") {
        const Rule1D r = cc_rule(1);
        REQUIRE(r.count() == 1);
        CHECK(r.points[0] == 0.0);
        CHECK(r.point_levels[0] == 1);
    }
    SUBCASE("level 2 is {1, 0, -1}") {
        const Rule1D r = cc_rule(2);
        REQUIRE(r.count() == 3);
        CHECK(r.points[0] == 1.0);
        CHECK(r.points[1] == 0.0);
        CHECK(r.points[2] == -1.0);
    }
    SUBCASE("counts follow the doubling rule") {
        CHECK(cc_count(1) == 1);
        CHECK(cc_count(2) == 3);
        CHECK(cc_count(3) == 5);
        CHECK(cc_count(4) == 9);
        CHECK(cc_count(9) == 257);
    }
    SUBCASE("rules are nested bit-for-bit") {
        for (std::size_t level = 1; level <= 8; ++level) {
            const Rule1D coarse = cc_rule(level);
            const Rule1D fine = cc_rule(level + 1);
            for (double p : coarse.points)
                CHECK(std::find(fine.points.begin(), fine.points.end(), p) != fine.points.end());
        }
    }
    SUBCASE("nodes are exactly symmetric") {
        const Rule1D r = cc_rule(6);
        const std::size_t m = r.count();
        for (std::size_t j = 0; j < m; ++j) CHECK(r.points[j] == -r.points[m - 1 - j]);
    }
}

TEST_CASE("1D Gaussian rule weights integrate low polynomials") {
    const double bound = 4.0;
    for (std::size_t level : {2ul, 3ul, 5ul, 7ul}) {
        const Rule1D rule = cc_rule(level);
        const Vector w = rule_gauss_weights(rule, bound);
        double total = 0.0, second = 0.0;
        for (std::size_t j = 0; j < rule.count(); ++j) {
            total += w[j];
            const double xi = bound * rule.points[j];
            second += w[j] * xi * xi;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        if (rule.count() >= 3)
            CHECK(second ==
                  doctest::Approx(truncated_normal_second_moment(bound)).epsilon(1e-11));
    }
}

TEST_CASE("smolyak_plan in one dimension collapses to the top rule") {
    const SparseGridPlan plan = smolyak_plan(1, 3, 4.0);
    const Rule1D top = cc_rule(4);
    REQUIRE(plan.node_count() == top.count());
    for (double p : top.points) {
        bool found = false;
        for (const Vector& node : plan.nodes) found |= (node[0] == 4.0 * p);
        CHECK(found);
    }
    REQUIRE(plan.terms.size() == 1);
    CHECK(plan.terms[0].coefficient == doctest::Approx(1.0));
}

TEST_CASE("the d = 3 level-8 grid enumerates 6017 nodes") {
    const SparseGridPlan plan = smolyak_plan(3, 8, 4.0);
    CHECK(plan.node_count() >= 6016);
    CHECK(plan.node_count() <= 6018);
    CHECK(plan.node_count() == 6017);

    double total = 0.0;
    double odd1 = 0.0, odd3 = 0.0;
    for (std::size_t j = 0; j < plan.node_count(); ++j) {
        total += plan.weights[j];
        odd1 += plan.weights[j] * plan.nodes[j][0];
        odd3 += plan.weights[j] * plan.nodes[j][0] * plan.nodes[j][1] * plan.nodes[j][2];
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
    CHECK(std::abs(odd1) <= 1e-12);
    CHECK(std::abs(odd3) <= 1e-12);
}

TEST_CASE("combination coefficients sum to one") {
    for (std::size_t dim : {1ul, 2ul, 3ul}) {
        const SparseGridPlan plan = smolyak_plan(dim, 3, 4.0);
        double total = 0.0;
        for (const auto& term : plan.terms) total += term.coefficient;
        CHECK(total == 1.0); // small integers, exact in doubles
    }
}

TEST_CASE("plans are nested across levels") {
    const SparseGridPlan coarse = smolyak_plan(2, 2, 4.0);
    const SparseGridPlan fine = smolyak_plan(2, 3, 4.0);
    for (const Vector& node : coarse.nodes) {
        bool found = false;
        for (const Vector& other : fine.nodes) found |= (node == other);
        CHECK(found);
    }
}

TEST_CASE("interpolation properties") {
    const SparseGridPlan plan = smolyak_plan(2, 3, 4.0);
    auto f = [](const Vector& xi) {
        return std::exp(0.2 * xi[0]) * std::cos(0.4 * xi[1]) + 0.3 * xi[0];
    };
    const Vector values = values_at_nodes(plan, f);

    SUBCASE("reproduces the stored values at every node") {
        for (std::size_t j = 0; j < plan.node_count(); ++j) {
            const double v = interpolate(plan, values, RandomPoint{plan.nodes[j]});
            CHECK(std::abs(v - values[j]) <= 1e-12 * std::max(1.0, std::abs(values[j])));
        }
    }
    SUBCASE("constant data interpolates to the constant everywhere") {
        const Vector ones(plan.node_count(), 1.0);
        std::mt19937 gen(3);
        std::uniform_real_distribution<double> dist(-4.0, 4.0);
        for (int rep = 0; rep < 20; ++rep) {
            const RandomPoint p{{dist(gen), dist(gen)}};
            CHECK(interpolate(plan, ones, p) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("low-degree polynomials are reproduced exactly") {
        auto poly = [](const Vector& xi) { return xi[0] * xi[0] + xi[0] * xi[1]; };
        const Vector pvals = values_at_nodes(plan, poly);
        std::mt19937 gen(5);
        std::uniform_real_distribution<double> dist(-4.0, 4.0);
        for (int rep = 0; rep < 20; ++rep) {
            const Vector p = {dist(gen), dist(gen)};
            const double v = interpolate(plan, pvals, RandomPoint{p});
            CHECK(v == doctest::Approx(poly(p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("combination form equals the difference form") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> dist(-0.9, 0.9);
    auto f = [](const Vector& xi) {
        return std::sin(0.5 * xi[0] + 0.2) * std::exp(0.1 * (xi.size() > 1 ? xi[1] : 0.0)) +
               0.05 * xi[0] * xi[0];
    };
    struct Case {
        std::size_t dim, level;
    };
    for (const Case c : {Case{1, 5}, Case{2, 4}, Case{2, 5}, Case{3, 3}, Case{3, 5}}) {
        const SparseGridPlan plan = smolyak_plan(c.dim, c.level, 4.0);
        const Vector values = values_at_nodes(plan, f);
        for (int rep = 0; rep < 3; ++rep) {
            Vector y(c.dim);
            for (double& v : y) v = dist(gen);
            Vector xi(c.dim);
            for (std::size_t k = 0; k < c.dim; ++k) xi[k] = 4.0 * y[k];
            const double fast = interpolate(plan, values, RandomPoint{xi});
            const double slow = difference_form(c.dim, c.level, 4.0, f, y);
            CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
        }
    }
}

TEST_CASE("moments against truncated-normal closed forms") {
    const double bound = 4.0;
    const SparseGridPlan plan = smolyak_plan(2, 4, bound);

    SUBCASE("constants") {
        const Vector c(plan.node_count(), 2.5);
        CHECK(moments(plan, c, 1) == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(moments(plan, c, 3) == doctest::Approx(15.625).epsilon(1e-12));
    }
    SUBCASE("first coordinate") {
        Vector values(plan.node_count());
        for (std::size_t j = 0; j < plan.node_count(); ++j) values[j] = plan.nodes[j][0];
        CHECK(std::abs(moments(plan, values, 1)) <= 1e-12);
        CHECK(moments(plan, values, 2) ==
              doctest::Approx(truncated_normal_second_moment(bound)).epsilon(1e-10));
    }
    SUBCASE("squared coordinate reaches the fourth moment") {
        Vector values(plan.node_count());
        for (std::size_t j = 0; j < plan.node_count(); ++j)
            values[j] = plan.nodes[j][0] * plan.nodes[j][0];
        CHECK(moments(plan, values, 1) ==
              doctest::Approx(truncated_normal_second_moment(bound)).epsilon(1e-10));
        CHECK(moments(plan, values, 2) ==
              doctest::Approx(truncated_normal_fourth_moment(bound)).epsilon(1e-10));
    }
}

TEST_CASE("gauss_hermite integrates normal moments exactly") {
    const GaussHermite gh = gauss_hermite(8);
    double total = 0.0, second = 0.0, fourth = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
        total += gh.weights[j];
        second += gh.weights[j] * gh.nodes[j] * gh.nodes[j];
        fourth += gh.weights[j] * std::pow(gh.nodes[j], 4);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(second == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fourth == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sparse moments agree with a tensor Gauss-Hermite oracle on a smooth function") {
    // Wide map bound so the domain-truncation bias sits below the tolerance.
    const double bound = 6.0;
    const SparseGridPlan plan = smolyak_plan(2, 6, bound);
    auto f = [](double x, double y) { return std::exp(0.3 * x) / (1.0 + 0.25 * y * y); };
    Vector values(plan.node_count());
    for (std::size_t j = 0; j < plan.node_count(); ++j)
        values[j] = f(plan.nodes[j][0], plan.nodes[j][1]);
    const double sparse_mean = moments(plan, values, 1);

    const GaussHermite gh = gauss_hermite(32);
    double exact = 0.0;
    for (std::size_t a = 0; a < 32; ++a)
        for (std::size_t b = 0; b < 32; ++b)
            exact += gh.weights[a] * gh.weights[b] * f(gh.nodes[a], gh.nodes[b]);
    CHECK(sparse_mean == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("nodes are stored in lexicographic visit order") {
    const SparseGridPlan plan = smolyak_plan(2, 3, 4.0);
    for (std::size_t j = 1; j < plan.node_count(); ++j) CHECK(plan.nodes[j - 1] < plan.nodes[j]);
    // Hierarchical levels are still tracked per node.
    bool has_center = false;
    for (std::size_t j = 0; j < plan.node_count(); ++j) {
        if (plan.nodes[j] == Vector{0.0, 0.0}) {
            has_center = true;
            CHECK(plan.node_levels[j] == plan.dim);
        }
    }
    CHECK(has_center);
}

TEST_CASE("min pairwise distance of a tiny plan") {
    const SparseGridPlan plan = smolyak_plan(1, 1, 4.0); // 1D level-2 rule: {4, 0, -4}
    CHECK(min_pairwise_distance(plan) == doctest::Approx(4.0));
}

TEST_CASE("node cap guard") {
    CHECK_THROWS_AS(smolyak_plan(3, 8, 4.0, 100), OutOfRange);
}
