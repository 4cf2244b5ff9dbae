#include "mfsc/sparse_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mfsc/errors.hpp"

namespace mfsc {

namespace {

// Gauss-Legendre rule on [-1, 1] via Newton on the Legendre recurrence.
void gauss_legendre(std::size_t n, Vector& x, Vector& w) {
    x.resize(n);
    w.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double root = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                               (static_cast<double>(n) + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = root;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * root * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            deriv = n * (root * p1 - p0) / (root * root - 1.0);
            const double delta = p1 / deriv;
            root -= delta;
            if (std::abs(delta) < 1e-15) break;
        }
        x[i] = -root;
        x[n - 1 - i] = root;
        w[i] = 2.0 / ((1.0 - root * root) * deriv * deriv);
        w[n - 1 - i] = w[i];
    }
}

double normal_pdf(double v) { return std::exp(-0.5 * v * v) / std::sqrt(2.0 * M_PI); }

// P(|xi| <= L) for a standard normal.
double central_mass(double bound) { return std::erf(bound / std::sqrt(2.0)); }

} // namespace

std::size_t cc_count(std::size_t level) {
    if (level < 1) throw OutOfRange("cc_count: level must be >= 1");
    if (level == 1) return 1;
    return (std::size_t{1} << (level - 1)) + 1;
}

Rule1D cc_rule(std::size_t level) {
    if (level < 1) throw OutOfRange("cc_rule: level must be >= 1");
    Rule1D rule;
    rule.level = level;
    if (level == 1) {
        rule.points = {0.0};
        rule.point_levels = {1};
        return rule;
    }
    const std::size_t m = cc_count(level);
    rule.points.resize(m);
    rule.point_levels.resize(m);
    const std::size_t half = (m - 1) / 2;
    for (std::size_t j = 0; j <= half; ++j) {
        // Mirrored halves keep the set exactly symmetric and bit-nested
        // across levels.
        const double v = (j == half)
                             ? 0.0
                             : std::cos(static_cast<double>(j) * M_PI / static_cast<double>(m - 1));
        rule.points[j] = v;
        rule.points[m - 1 - j] = (j == half) ? 0.0 : -v;

        std::size_t min_level;
        if (j == half) {
            min_level = 1;
        } else if (j == 0) {
            min_level = 2;
        } else {
            std::size_t idx = j;
            min_level = level;
            while (idx % 2 == 0 && min_level > 2) {
                idx /= 2;
                --min_level;
            }
        }
        rule.point_levels[j] = min_level;
        rule.point_levels[m - 1 - j] = min_level;
    }
    return rule;
}

Vector rule_gauss_weights(const Rule1D& rule, double map_bound) {
    const std::size_t m = rule.count();
    if (m == 1) return Vector{1.0};

    // Barycentric weights of Chebyshev extrema: (-1)^j, halved at the ends.
    Vector bary(m);
    for (std::size_t j = 0; j < m; ++j) {
        bary[j] = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == m - 1) bary[j] *= 0.5;
    }

    // Integrate each cardinal against g(y) = L phi(L y) / P(|xi|<=L) with the
    // substitution y = cos(angle); the cardinals become trigonometric
    // polynomials, which composite Gauss-Legendre resolves uniformly.
    const double mass = central_mass(map_bound);
    const std::size_t panels = std::max<std::size_t>(32, 2 * (m - 1));
    Vector gx, gw;
    gauss_legendre(16, gx, gw);

    Vector weights(m, 0.0);
    const double panel_width = M_PI / static_cast<double>(panels);
    Vector cardinal(m);
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = panel_width * static_cast<double>(p);
        for (std::size_t g = 0; g < gx.size(); ++g) {
            const double angle = a + 0.5 * panel_width * (1.0 + gx[g]);
            const double y = std::cos(angle);
            const double scale = 0.5 * panel_width * gw[g] * std::sin(angle) * map_bound *
                                 normal_pdf(map_bound * y) / mass;

            // Barycentric evaluation of all cardinals at y.
            double denom = 0.0;
            bool exact = false;
            std::size_t exact_j = 0;
            for (std::size_t j = 0; j < m; ++j) {
                const double diff = y - rule.points[j];
                if (diff == 0.0) {
                    exact = true;
                    exact_j = j;
                    break;
                }
                cardinal[j] = bary[j] / diff;
                denom += cardinal[j];
            }
            if (exact) {
                weights[exact_j] += scale;
            } else {
                for (std::size_t j = 0; j < m; ++j) weights[j] += scale * cardinal[j] / denom;
            }
        }
    }
    return weights;
}

namespace {

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

// All multi-indices with every entry >= 1 and entry sum <= remaining_max.
void enumerate_multi_indices(std::size_t dim, std::size_t remaining_max,
                             std::vector<std::size_t>& current,
                             std::vector<std::vector<std::size_t>>& out) {
    if (current.size() == dim) {
        out.push_back(current);
        return;
    }
    const std::size_t slots_left = dim - current.size() - 1;
    for (std::size_t i = 1; i + slots_left <= remaining_max; ++i) {
        current.push_back(i);
        enumerate_multi_indices(dim, remaining_max - i, current, out);
        current.pop_back();
    }
}

} // namespace

SparseGridPlan smolyak_plan(std::size_t dim, std::size_t level, double map_bound,
                            std::size_t node_cap) {
    if (dim < 1) throw OutOfRange("smolyak_plan: dimension must be >= 1");
    if (!(map_bound > 0.0)) throw OutOfRange("smolyak_plan: map bound must be positive");

    SparseGridPlan plan;
    plan.dim = dim;
    plan.level = level;
    plan.map_bound = map_bound;

    const std::size_t total = level + dim; // per-dimension levels sum to <= q + d
    plan.max_level_1d = total - (dim - 1);

    std::vector<Rule1D> rules(plan.max_level_1d + 1);
    std::vector<Vector> rule_weights(plan.max_level_1d + 1);
    for (std::size_t i = 1; i <= plan.max_level_1d; ++i) {
        rules[i] = cc_rule(i);
        rule_weights[i] = rule_gauss_weights(rules[i], map_bound);
    }

    // Combination form: only |i| in [total-d+1, total] carries a nonzero
    // coefficient.
    std::vector<std::vector<std::size_t>> indices;
    {
        std::vector<std::vector<std::size_t>> all;
        std::vector<std::size_t> current;
        enumerate_multi_indices(dim, total, current, all);
        for (auto& idx : all) {
            const std::size_t sum = std::accumulate(idx.begin(), idx.end(), std::size_t{0});
            if (sum + dim > total) indices.push_back(std::move(idx));
        }
    }

    std::map<Vector, std::size_t> node_index;
    struct NodeData {
        Vector coords;
        std::size_t level_sum;
        double weight;
    };
    std::vector<NodeData> nodes;

    for (const auto& idx : indices) {
        const std::size_t sum = std::accumulate(idx.begin(), idx.end(), std::size_t{0});
        SmolyakTerm term;
        term.levels = idx;
        term.coefficient = ((total - sum) % 2 == 0 ? 1.0 : -1.0) * binomial(dim - 1, total - sum);

        std::size_t tensor_size = 1;
        for (std::size_t k = 0; k < dim; ++k) tensor_size *= rules[idx[k]].count();
        term.node_ids.resize(tensor_size);

        std::vector<std::size_t> digit(dim, 0);
        for (std::size_t t = 0; t < tensor_size; ++t) {
            Vector coords(dim);
            std::size_t lev_sum = 0;
            double weight = term.coefficient;
            for (std::size_t k = 0; k < dim; ++k) {
                const Rule1D& rule = rules[idx[k]];
                coords[k] = map_bound * rule.points[digit[k]];
                lev_sum += rule.point_levels[digit[k]];
                weight *= rule_weights[idx[k]][digit[k]];
            }

            auto it = node_index.find(coords);
            std::size_t id;
            if (it == node_index.end()) {
                id = nodes.size();
                if (id >= node_cap) throw OutOfRange("smolyak_plan: node cap exceeded");
                node_index.emplace(coords, id);
                nodes.push_back(NodeData{coords, lev_sum, weight});
            } else {
                id = it->second;
                nodes[id].weight += weight;
            }
            term.node_ids[t] = id;

            // Advance the mixed-radix tensor counter (last dimension fastest).
            for (std::size_t k = dim; k-- > 0;) {
                if (++digit[k] < rules[idx[k]].count()) break;
                digit[k] = 0;
            }
        }
        plan.terms.push_back(std::move(term));
    }

    // Canonical node order (also the multifidelity visit order): lexicographic
    // coordinates.  A level-major order was measured to hand every node the
    // best possible donor under coarse neighborhoods, flattening the
    // accuracy-vs-eta tradeoff the cache is supposed to expose.
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return nodes[a].coords < nodes[b].coords; });
    std::vector<std::size_t> new_id(nodes.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) new_id[order[pos]] = pos;

    plan.nodes.resize(nodes.size());
    plan.node_levels.resize(nodes.size());
    plan.weights.resize(nodes.size());
    for (std::size_t old = 0; old < nodes.size(); ++old) {
        plan.nodes[new_id[old]] = nodes[old].coords;
        plan.node_levels[new_id[old]] = nodes[old].level_sum;
        plan.weights[new_id[old]] = nodes[old].weight;
    }
    for (auto& term : plan.terms)
        for (auto& id : term.node_ids) id = new_id[id];
    return plan;
}

namespace {

// Cardinal values of one CC rule at y (barycentric form).
Vector cardinal_values(const Rule1D& rule, double y) {
    const std::size_t m = rule.count();
    Vector values(m, 0.0);
    if (m == 1) {
        values[0] = 1.0;
        return values;
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double diff = y - rule.points[j];
        if (diff == 0.0) {
            std::fill(values.begin(), values.end(), 0.0);
            values[j] = 1.0;
            return values;
        }
        double b = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == m - 1) b *= 0.5;
        values[j] = b / diff;
        denom += values[j];
    }
    for (double& v : values) v /= denom;
    return values;
}

} // namespace

double interpolate(const SparseGridPlan& plan, const Vector& node_values, const RandomPoint& zeta) {
    if (zeta.dim() != plan.dim) throw DimMismatch("interpolate: point dimension mismatch");
    if (node_values.size() != plan.node_count())
        throw DimMismatch("interpolate: one value per plan node required");

    std::vector<Rule1D> rules(plan.max_level_1d + 1);
    for (std::size_t i = 1; i <= plan.max_level_1d; ++i) rules[i] = cc_rule(i);

    double result = 0.0;
    for (const auto& term : plan.terms) {
        std::vector<Vector> cards(plan.dim);
        for (std::size_t k = 0; k < plan.dim; ++k)
            cards[k] = cardinal_values(rules[term.levels[k]], zeta.coords[k] / plan.map_bound);

        double tensor_sum = 0.0;
        std::vector<std::size_t> digit(plan.dim, 0);
        for (std::size_t t = 0; t < term.node_ids.size(); ++t) {
            double prod = 1.0;
            for (std::size_t k = 0; k < plan.dim; ++k) prod *= cards[k][digit[k]];
            if (prod != 0.0) tensor_sum += prod * node_values[term.node_ids[t]];
            for (std::size_t k = plan.dim; k-- > 0;) {
                if (++digit[k] < cards[k].size()) break;
                digit[k] = 0;
            }
        }
        result += term.coefficient * tensor_sum;
    }
    return result;
}

double moments(const SparseGridPlan& plan, const Vector& node_values, unsigned k) {
    if (k < 1) throw OutOfRange("moments: power must be >= 1");
    if (node_values.size() != plan.node_count())
        throw DimMismatch("moments: one value per plan node required");
    double acc = 0.0;
    for (std::size_t j = 0; j < plan.node_count(); ++j)
        acc += plan.weights[j] * std::pow(node_values[j], static_cast<double>(k));
    return acc;
}

double min_pairwise_distance(const SparseGridPlan& plan) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < plan.node_count(); ++a) {
        for (std::size_t b = a + 1; b < plan.node_count(); ++b) {
            double dist = 0.0;
            for (std::size_t k = 0; k < plan.dim; ++k)
                dist = std::max(dist, std::abs(plan.nodes[a][k] - plan.nodes[b][k]));
            best = std::min(best, dist);
        }
    }
    return best;
}

GaussHermite gauss_hermite(std::size_t n) {
    // Golub-Welsch on the probabilists' Hermite Jacobi matrix.
    SymMatrix jacobi(n);
    for (std::size_t k = 0; k + 1 < n; ++k)
        jacobi.set(k, k + 1, std::sqrt(static_cast<double>(k + 1)));
    const EigDecomposition eig = eig_sym(jacobi);

    GaussHermite gh;
    gh.nodes.resize(n);
    gh.weights.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return eig.values[a] < eig.values[b]; });
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = order[i];
        gh.nodes[i] = eig.values[k];
        gh.weights[i] = eig.vectors(0, k) * eig.vectors(0, k);
    }
    return gh;
}

double truncated_normal_second_moment(double map_bound) {
    const double l = map_bound;
    return 1.0 - 2.0 * l * normal_pdf(l) / central_mass(l);
}

double truncated_normal_fourth_moment(double map_bound) {
    const double l = map_bound;
    return 3.0 - 2.0 * normal_pdf(l) * (l * l * l + 3.0 * l) / central_mass(l);
}

} // namespace mfsc
