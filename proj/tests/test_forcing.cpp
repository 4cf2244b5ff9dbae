#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mfsc/errors.hpp"
#include "mfsc/forcing.hpp"

using namespace mfsc;

namespace {

ForcingSpec paper_spec(std::size_t dim, double horizon = 0.8) {
    return ForcingSpec{SpatialAmplitude::paper(), horizon, dim, TemporalBasis::Trigonometric};
}

// Composite Simpson quadrature, the independent oracle for time integrals.
template <typename F>
double simpson(F f, double a, double b, std::size_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * i);
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("basis_eval matches the closed forms at T = 0.8") {
    const ForcingSpec spec = paper_spec(4);
    CHECK(basis_eval(1, 0.3, spec) == doctest::Approx(1.0 / std::sqrt(0.8)).epsilon(1e-12));
    CHECK(basis_eval(1, 0.3, spec) == doctest::Approx(1.118034).epsilon(1e-6));
    CHECK(basis_eval(2, 0.0, spec) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
    CHECK(basis_eval(3, 0.4, spec) == doctest::Approx(-std::sqrt(2.5)).epsilon(1e-12));
}

TEST_CASE("basis_eval rejects out-of-range arguments") {
    const ForcingSpec spec = paper_spec(2);
    CHECK_THROWS_AS(basis_eval(0, 0.1, spec), OutOfRange);
    CHECK_THROWS_AS(basis_eval(3, 0.1, spec), OutOfRange);
    CHECK_THROWS_AS(basis_eval(1, -0.1, spec), OutOfRange);
    CHECK_THROWS_AS(basis_eval(1, 0.9, spec), OutOfRange);
}

TEST_CASE("temporal basis is orthonormal on [0, T]") {
    const ForcingSpec spec = paper_spec(6);
    for (std::size_t j = 1; j <= 6; ++j) {
        for (std::size_t k = j; k <= 6; ++k) {
            const double integral = simpson(
                [&](double t) { return basis_eval(j, t, spec) * basis_eval(k, t, spec); }, 0.0,
                spec.horizon, 2048);
            CHECK(integral == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("forcing vanishes for zero coefficients") {
    const ForcingSpec spec = paper_spec(3);
    const RandomPoint zero = zero_point(3);
    for (double t : {0.0, 0.3, 0.8})
        for (double x : {0.0, 0.4, 1.0}) CHECK(forcing_eval(zero, spec, t, x) == 0.0);
}

TEST_CASE("one-term forcing reduces to the amplitude times h_1") {
    const ForcingSpec spec = paper_spec(1);
    const RandomPoint xi{{1.0}};
    for (double t : {0.0, 0.2, 0.5, 0.8}) {
        CHECK(forcing_eval(xi, spec, t, 0.0) ==
              doctest::Approx(0.1 * basis_eval(1, t, spec)).epsilon(1e-14));
    }
}

TEST_CASE("forcing vanishes where the amplitude does") {
    const ForcingSpec spec = paper_spec(5);
    std::mt19937 gen(11);
    std::normal_distribution<double> dist;
    RandomPoint xi{Vector(5)};
    for (double& v : xi.coords) v = dist(gen);
    // sigma(0.125) = 0.1 cos(pi/2) = 0.
    CHECK(std::abs(forcing_eval(xi, spec, 0.33, 0.125)) < 1e-15);
}

TEST_CASE("forcing dimension mismatch is rejected") {
    const ForcingSpec spec = paper_spec(3);
    CHECK_THROWS_AS(forcing_eval(zero_point(2), spec, 0.1, 0.5), DimMismatch);
}

TEST_CASE("forcing is linear in the random point") {
    const ForcingSpec spec = paper_spec(4);
    std::mt19937 gen(21);
    std::normal_distribution<double> dist;
    RandomPoint a{Vector(4)}, b{Vector(4)};
    for (std::size_t k = 0; k < 4; ++k) {
        a.coords[k] = dist(gen);
        b.coords[k] = dist(gen);
    }
    const double la = 0.7, lb = -1.3;
    RandomPoint combo{Vector(4)};
    for (std::size_t k = 0; k < 4; ++k) combo.coords[k] = la * a.coords[k] + lb * b.coords[k];
    for (double t : {0.1, 0.6})
        for (double x : {0.2, 0.9}) {
            const double lhs = forcing_eval(combo, spec, t, x);
            const double rhs = la * forcing_eval(a, spec, t, x) + lb * forcing_eval(b, spec, t, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
        }
}

TEST_CASE("theta derivative of the forcing") {
    const ForcingSpec spec = paper_spec(3);
    std::mt19937 gen(31);
    std::normal_distribution<double> dist;
    RandomPoint xi{Vector(3)};
    for (double& v : xi.coords) v = dist(gen);

    SUBCASE("zero direction") {
        CHECK(forcing_theta_derivative(xi, xi, spec, 0.4, 0.3) == 0.0);
    }
    SUBCASE("unit direction") {
        RandomPoint zeta = xi;
        zeta.coords[0] += 1.0;
        const double expected = spec.sigma(0.3) * basis_eval(1, 0.4, spec);
        CHECK(forcing_theta_derivative(xi, zeta, spec, 0.4, 0.3) ==
              doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("finite difference is exact by linearity") {
        RandomPoint zeta = xi;
        for (double& v : zeta.coords) v += dist(gen);
        const double h = 0.25; // any step: f is linear in the point
        RandomPoint shifted = xi;
        for (std::size_t k = 0; k < 3; ++k)
            shifted.coords[k] += h * (zeta.coords[k] - xi.coords[k]);
        for (double t : {0.15, 0.7})
            for (double x : {0.05, 0.85}) {
                const double fd =
                    (forcing_eval(shifted, spec, t, x) - forcing_eval(xi, spec, t, x)) / h;
                CHECK(forcing_theta_derivative(xi, zeta, spec, t, x) ==
                      doctest::Approx(fd).epsilon(1e-12));
            }
    }
}

TEST_CASE("truncation variance starts at zero and decreases in d") {
    const double T = 0.8;
    CHECK(truncation_variance(1, 0.0, T) == 0.0);
    CHECK(truncation_variance(40, 0.0, T) == 0.0);

    const double s = T / 2.0;
    double prev = truncation_variance(1, s, T);
    CHECK(prev >= 0.0);
    for (std::size_t d = 2; d <= 64; ++d) {
        const double cur = truncation_variance(d, s, T);
        CHECK(cur >= -1e-15);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
    CHECK(prev < 2e-3); // converges toward zero
}

TEST_CASE("truncation variance matches a quadrature oracle for the antiderivatives") {
    const double T = 0.8;
    const ForcingSpec spec = paper_spec(64, T);
    for (double s : {0.2, 0.5, T}) {
        for (std::size_t d : {1ul, 2ul, 5ul, 16ul}) {
            double captured = 0.0;
            for (std::size_t k = 1; k <= d; ++k) {
                const double integral =
                    simpson([&](double t) { return basis_eval(k, t, spec); }, 0.0, s, 4096);
                captured += integral * integral;
            }
            CHECK(truncation_variance(d, s, T) == doctest::Approx(s - captured).epsilon(1e-10));
        }
    }
}

TEST_CASE("truncation variance at s = T has no contribution beyond the first mode") {
    const double T = 0.8;
    // Every k >= 2 antiderivative vanishes at s = T, so d = 1 already captures T.
    CHECK(truncation_variance(1, T, T) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("tabulated amplitude interpolates linearly") {
    const SpatialAmplitude amp = SpatialAmplitude::tabulated({0.0, 0.5, 1.0}, {1.0, 3.0, -1.0});
    CHECK(amp(0.25) == doctest::Approx(2.0));
    CHECK(amp(0.75) == doctest::Approx(1.0));
    CHECK(amp(0.0) == doctest::Approx(1.0));
    CHECK(amp(1.0) == doctest::Approx(-1.0));
}
