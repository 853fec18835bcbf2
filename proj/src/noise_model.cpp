#include "qho/noise_model.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qho/errors.hpp"

namespace qho {

void HybridNoiseSpec::validate() const {
    if (!(sigma_g2 >= 0) || !std::isfinite(sigma_g2)) throw ParameterError("noise sigma_g2 must be >= 0");
    if (!std::isfinite(mu_g)) throw ParameterError("noise mu_g must be finite");
    if (!(lambda_p >= 0) || !std::isfinite(lambda_p)) throw ParameterError("noise lambda_p must be >= 0");
    if (!(quantum > 0) || !std::isfinite(quantum)) throw ParameterError("noise quantum hbar_f must be > 0");
}

NoiseMoments hybrid_moments(const HybridNoiseSpec& spec) {
    spec.validate();
    NoiseMoments m;
    m.mean = spec.mu_g + spec.quantum * spec.lambda_p;
    m.variance = spec.sigma_g2 + spec.quantum * spec.quantum * spec.lambda_p;
    m.second_central = m.variance;
    return m;
}

int poisson_truncation(double lambda_p) {
    return static_cast<int>(std::ceil(lambda_p + 12.0 * std::sqrt(lambda_p) + 30.0));
}

double hybrid_density(const HybridNoiseSpec& spec, double x) {
    spec.validate();
    if (spec.sigma_g2 == 0.0) {
        throw AtomicDistributionError("sigma_g2 = 0 makes the hybrid noise atomic; use the Poisson mass function");
    }
    const double sd = std::sqrt(spec.sigma_g2);
    const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    const int kmax = poisson_truncation(spec.lambda_p);
    double total = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        // log Pois(k; lambda), with 0 log 0 = 0 at lambda = 0.
        double log_pk;
        if (spec.lambda_p == 0.0) {
            if (k > 0) break;
            log_pk = 0.0;
        } else {
            log_pk = k * std::log(spec.lambda_p) - spec.lambda_p - std::lgamma(k + 1.0);
        }
        const double d = (x - spec.mu_g - spec.quantum * k) / sd;
        total += std::exp(log_pk - 0.5 * d * d);
    }
    return norm * total;
}

double cross_psd(const HybridNoiseSpec& spec, double frequency, double bandwidth) {
    spec.validate();
    if (!(bandwidth > 0)) throw ParameterError("bandwidth must be positive");
    if (!(frequency >= 0) || frequency > bandwidth) return 0.0;
    return spec.sigma_g2 + spec.quantum * spec.quantum * spec.lambda_p;
}

CounterRng::result_type CounterRng::operator()() {
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (++counter_);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> sample_hybrid_noise(const HybridNoiseSpec& spec, std::size_t count, std::uint64_t seed) {
    spec.validate();
    CounterRng rng(seed);
    std::normal_distribution<double> gauss(spec.mu_g, std::sqrt(spec.sigma_g2));
    std::vector<double> out(count);
    if (spec.lambda_p == 0.0) {
        for (double& v : out) v = spec.sigma_g2 > 0 ? gauss(rng) : spec.mu_g;
        return out;
    }
    std::poisson_distribution<long long> counts(spec.lambda_p);
    for (double& v : out) {
        const double g = spec.sigma_g2 > 0 ? gauss(rng) : spec.mu_g;
        v = g + spec.quantum * static_cast<double>(counts(rng));
    }
    return out;
}

}  // namespace qho
