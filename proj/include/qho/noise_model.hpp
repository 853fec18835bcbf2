#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace qho {

/// N = G + q P with G ~ Normal(mu_g, sigma_g2) and P ~ Poisson(lambda_p) independent.
struct HybridNoiseSpec {
    double sigma_g2 = 1.0;
    double mu_g = 0.0;
    double lambda_p = 0.0;
    double quantum = 1.0;  // energy per count (hbar f)

    void validate() const;
};

struct NoiseMoments {
    double mean = 0;
    double variance = 0;
    double second_central = 0;
};

NoiseMoments hybrid_moments(const HybridNoiseSpec& spec);

/// Last Poisson term kept in the mixture: ceil(lambda + 12 sqrt(lambda) + 30).
int poisson_truncation(double lambda_p);

/// Gaussian-Poisson mixture density. Throws AtomicDistributionError when sigma_g2 == 0.
double hybrid_density(const HybridNoiseSpec& spec, double x);

/// Combined spectral level of the two components per unit bandwidth (white),
/// flat on [0, bandwidth]; total noise power is the result times bandwidth.
double cross_psd(const HybridNoiseSpec& spec, double frequency, double bandwidth);

/// Counter-based 64-bit generator (SplitMix64 of seed + counter). Usable as a
/// UniformRandomBitGenerator; draw k depends only on (seed, k).
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

/// `count` draws of N, reproducible from `seed`.
std::vector<double> sample_hybrid_noise(const HybridNoiseSpec& spec, std::size_t count, std::uint64_t seed);

}  // namespace qho
