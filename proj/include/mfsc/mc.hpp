#ifndef MFSC_MC_HPP
#define MFSC_MC_HPP

#include <cstddef>
#include <cstdint>

#include "mfsc/fem.hpp"
#include "mfsc/forcing.hpp"
#include "mfsc/linalg.hpp"

namespace mfsc {

struct McConfig {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    GfeConfig gfe;
};

// Deterministic counter-based sampling: coordinate k of sample `index` is the
// inverse normal CDF of a SplitMix64-mixed uniform keyed by
// (seed, index*dim + k).  Identical across runs given identical inputs.
RandomPoint sample_point(std::uint64_t seed, std::uint64_t index, std::size_t dim);

double standard_normal_inverse_cdf(double p);

struct McMoments {
    Vector mean;           // sample mean of u(T, .) per interior node
    Vector second_moment;  // sample mean of u(T, .)^2
    Vector se_mean;        // standard error of the mean
    std::size_t samples = 0;
};

// Sample moments of u(T, .) over independent GFE solves, accumulated in index
// order.
McMoments mc_moments(const McConfig& cfg);

} // namespace mfsc

#endif
