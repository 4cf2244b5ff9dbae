#include "mfsc/mc.hpp"

#include <cmath>

#include "mfsc/errors.hpp"

namespace mfsc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform_open(std::uint64_t bits) {
    // (0, 1), symmetric about 1/2.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace

double standard_normal_inverse_cdf(double p) {
    // Wichura's PPND16 rational approximations (double-precision accurate).
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return q < 0.0 ? -value : value;
}

RandomPoint sample_point(std::uint64_t seed, std::uint64_t index, std::size_t dim) {
    RandomPoint point;
    point.coords.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const std::uint64_t counter = index * static_cast<std::uint64_t>(dim) + k;
        const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(counter));
        point.coords[k] = standard_normal_inverse_cdf(uniform_open(bits));
    }
    return point;
}

McMoments mc_moments(const McConfig& cfg) {
    if (cfg.samples < 1) throw BadCount("mc_moments: need at least one sample");
    const std::size_t n = cfg.gfe.mesh.n_interior;
    const std::size_t d = cfg.gfe.spec.dim;

    // Welford accumulation in index order: bit-stable and free of the
    // cancellation that a raw sum-of-squares variance suffers.
    Vector mean(n, 0.0);
    Vector m2(n, 0.0);
    Vector sum_sq(n, 0.0);
    for (std::size_t index = 0; index < cfg.samples; ++index) {
        Trajectory traj;
        try {
            traj = solve_gfe(sample_point(cfg.seed, index, d), cfg.gfe);
        } catch (const Error& err) {
            throw Error("sample " + std::to_string(index) + ": " + err.what());
        }
        const Vector& field = traj.states.back();
        const double count = static_cast<double>(index + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = field[i] - mean[i];
            mean[i] += delta / count;
            m2[i] += delta * (field[i] - mean[i]);
            sum_sq[i] += field[i] * field[i];
        }
    }

    McMoments out;
    out.samples = cfg.samples;
    out.mean = std::move(mean);
    out.second_moment.resize(n);
    out.se_mean.resize(n);
    const double ns = static_cast<double>(cfg.samples);
    for (std::size_t i = 0; i < n; ++i) {
        out.second_moment[i] = sum_sq[i] / ns;
        const double variance = cfg.samples > 1 ? std::max(0.0, m2[i] / (ns - 1.0)) : 0.0;
        out.se_mean[i] = std::sqrt(variance / ns);
    }
    return out;
}

} // namespace mfsc
