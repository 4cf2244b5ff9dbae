#include "mfsc/forcing.hpp"

#include <algorithm>
#include <cmath>

#include "mfsc/errors.hpp"

namespace mfsc {

RandomPoint zero_point(std::size_t dim) { return RandomPoint{Vector(dim, 0.0)}; }

SpatialAmplitude SpatialAmplitude::paper() { return SpatialAmplitude{}; }

SpatialAmplitude SpatialAmplitude::constant(double value) {
    SpatialAmplitude a;
    a.kind_ = Kind::Constant;
    a.value_ = value;
    a.name_ = "constant";
    return a;
}

SpatialAmplitude SpatialAmplitude::tabulated(Vector x, Vector values) {
    if (x.size() != values.size() || x.size() < 2)
        throw DimMismatch("tabulated amplitude needs matching x/value lists with >= 2 entries");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw OutOfRange("tabulated amplitude abscissas must increase");
    SpatialAmplitude a;
    a.kind_ = Kind::Tabulated;
    a.tab_x_ = std::move(x);
    a.tab_v_ = std::move(values);
    a.name_ = "tabulated";
    return a;
}

double SpatialAmplitude::operator()(double x) const {
    switch (kind_) {
    case Kind::Paper:
        return 0.1 * std::cos(4.0 * M_PI * x);
    case Kind::Constant:
        return value_;
    case Kind::Tabulated: {
        if (x <= tab_x_.front()) return tab_v_.front();
        if (x >= tab_x_.back()) return tab_v_.back();
        const auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - tab_x_.begin());
        const double w = (x - tab_x_[i - 1]) / (tab_x_[i] - tab_x_[i - 1]);
        return tab_v_[i - 1] + w * (tab_v_[i] - tab_v_[i - 1]);
    }
    }
    return 0.0;
}

double basis_eval(std::size_t k, double t, const ForcingSpec& spec) {
    const double T = spec.horizon;
    if (k < 1 || k > spec.dim) throw OutOfRange("basis_eval: index outside 1..dim");
    if (t < 0.0 || t > T) throw OutOfRange("basis_eval: time outside [0, T]");
    if (k == 1) return 1.0 / std::sqrt(T);
    return std::sqrt(2.0 / T) * std::cos(static_cast<double>(k - 1) * M_PI * t / T);
}

double basis_integral(std::size_t k, double s, double horizon) {
    const double T = horizon;
    if (k == 1) return s / std::sqrt(T);
    const double omega = static_cast<double>(k - 1) * M_PI / T;
    return std::sqrt(2.0 / T) * std::sin(omega * s) / omega;
}

double forcing_temporal(const RandomPoint& point, const ForcingSpec& spec, double t) {
    if (point.dim() != spec.dim)
        throw DimMismatch("forcing_temporal: point dimension != spec dimension");
    double sum = 0.0;
    for (std::size_t k = 1; k <= spec.dim; ++k)
        sum += point.coords[k - 1] * basis_eval(k, t, spec);
    return sum;
}

double forcing_eval(const RandomPoint& point, const ForcingSpec& spec, double t, double x) {
    return spec.sigma(x) * forcing_temporal(point, spec, t);
}

double forcing_theta_derivative(const RandomPoint& xi, const RandomPoint& zeta,
                                const ForcingSpec& spec, double t, double x) {
    if (xi.dim() != zeta.dim()) throw DimMismatch("forcing_theta_derivative: point dimensions differ");
    RandomPoint dir;
    dir.coords.resize(xi.dim());
    for (std::size_t k = 0; k < xi.dim(); ++k) dir.coords[k] = zeta.coords[k] - xi.coords[k];
    return forcing_eval(dir, spec, t, x);
}

double truncation_variance(std::size_t d, double s, double horizon) {
    if (s < 0.0 || s > horizon) throw OutOfRange("truncation_variance: s outside [0, T]");
    double captured = 0.0;
    for (std::size_t k = 1; k <= d; ++k) {
        const double c = basis_integral(k, s, horizon);
        captured += c * c;
    }
    return s - captured;
}

} // namespace mfsc
