#ifndef MFSC_FORCING_HPP
#define MFSC_FORCING_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mfsc/linalg.hpp"

namespace mfsc {

// One realization of the truncated noise: a d-vector of standard-normal
// coordinates.
struct RandomPoint {
    Vector coords;

    std::size_t dim() const { return coords.size(); }
};

RandomPoint zero_point(std::size_t dim);

// Spatial amplitude of the noise.  "paper" is 0.1*cos(4*pi*x); tabulated
// amplitudes are interpolated piecewise linearly on [0,1].
class SpatialAmplitude {
public:
    static SpatialAmplitude paper();
    static SpatialAmplitude constant(double value);
    static SpatialAmplitude tabulated(Vector x, Vector values);

    double operator()(double x) const;
    const std::string& name() const { return name_; }

private:
    enum class Kind { Paper, Constant, Tabulated };
    Kind kind_ = Kind::Paper;
    double value_ = 0.0;
    Vector tab_x_;
    Vector tab_v_;
    std::string name_ = "paper";
};

enum class TemporalBasis { Trigonometric };

// f_d(t,x) = sigma(x) * sum_{k<=d} xi_k h_k(t) on [0,T] x [0,1].
struct ForcingSpec {
    SpatialAmplitude sigma;
    double horizon = 0.0; // T
    std::size_t dim = 0;  // d
    TemporalBasis basis = TemporalBasis::Trigonometric;
};

// h_1 = 1/sqrt(T), h_k = sqrt(2/T) cos((k-1) pi t / T) for k >= 2.
double basis_eval(std::size_t k, double t, const ForcingSpec& spec);

// Closed-form antiderivative: integral of h_k over [0, s].
double basis_integral(std::size_t k, double s, double horizon);

double forcing_eval(const RandomPoint& point, const ForcingSpec& spec, double t, double x);

// The time-dependent factor sum_{k<=d} xi_k h_k(t); the forcing is this
// times sigma(x).
double forcing_temporal(const RandomPoint& point, const ForcingSpec& spec, double t);

// Derivative of the forcing along the segment xi + theta*(zeta - xi):
// sigma(x) * sum (zeta_k - xi_k) h_k(t).
double forcing_theta_derivative(const RandomPoint& xi, const RandomPoint& zeta,
                                const ForcingSpec& spec, double t, double x);

// Mean-square truncation error of W(s) after d basis terms:
// s - sum_{k<=d} (integral_0^s h_k)^2.
double truncation_variance(std::size_t d, double s, double horizon);

} // namespace mfsc

#endif
