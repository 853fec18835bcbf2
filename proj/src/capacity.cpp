#include "qho/capacity.hpp"

#include <cmath>
#include <sstream>

#include "qho/errors.hpp"

namespace qho {

void CapacityInputs::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(bandwidth > 0) || !finite(bandwidth)) throw ParameterError("bandwidth must be > 0");
    if (!(power >= 0) || !finite(power)) throw ParameterError("signal power must be >= 0");
    if (!(noise_psd >= 0) || !finite(noise_psd)) throw ParameterError("noise PSD N0 must be >= 0");
    if (!(photon_energy > 0) || !finite(photon_energy)) throw ParameterError("photon energy must be > 0");
    if (!(quantum_noise >= 0) || !finite(quantum_noise)) throw ParameterError("quantum noise N must be >= 0");
    if (!(chi > 0) || !finite(chi)) throw ParameterError("chi must be > 0");
}

double g_entropy(double x) {
    if (!(x >= 0)) throw DomainError("g(x) needs x >= 0");
    if (x == 0.0) return 0.0;
    return (1.0 + x) * std::log2(1.0 + x) - x * std::log2(x);
}

double shannon_capacity(const CapacityInputs& in) {
    in.validate();
    const double noise = in.noise_psd * in.bandwidth;
    if (in.power == 0.0) return 0.0;
    if (noise == 0.0) throw InfiniteCapacityError("noiseless channel with positive power has infinite capacity");
    return in.bandwidth * std::log2(1.0 + in.power / noise);
}

double fock_per_mode(const CapacityInputs& in) {
    in.validate();
    return g_entropy(in.power / (in.photon_energy * in.bandwidth));
}

double fock_capacity(const CapacityInputs& in) { return in.bandwidth * fock_per_mode(in); }

double holevo_per_mode(const CapacityInputs& in) {
    in.validate();
    const double hf = in.photon_energy;
    const double out = (in.quantum_noise * in.bandwidth + in.power * in.chi) / (hf * in.bandwidth);
    return g_entropy(out) - g_entropy(in.quantum_noise / hf);
}

double holevo_capacity(const CapacityInputs& in) { return in.bandwidth * holevo_per_mode(in); }

EaTerms ea_terms(const CapacityInputs& in, EaMode mode) {
    in.validate();
    const double hf = in.photon_energy;
    EaTerms t;
    if (mode == EaMode::as_printed) {
        t.zeta_n = in.quantum_noise / hf;
        t.zeta_v = in.power * in.chi / (in.bandwidth * hf);
    } else {
        const double signal = in.power / (in.bandwidth * hf);
        t.zeta_n = signal;
        t.zeta_v = in.chi * signal + in.quantum_noise / hf - signal;
    }
    const double a = 2.0 * t.zeta_n + t.zeta_v + 1.0;
    t.discriminant = a * a - 4.0 * in.chi * t.zeta_n * (t.zeta_n + 1.0);
    if (t.discriminant < 0.0) {
        std::ostringstream msg;
        msg << "entanglement-assisted bound undefined: discriminant " << t.discriminant << " < 0; need chi <= "
            << a * a / (4.0 * t.zeta_n * (t.zeta_n + 1.0));
        throw RegimeError(msg.str());
    }
    const double root = std::sqrt(t.discriminant);
    t.d_plus = 0.5 * (root - 1.0 + t.zeta_v);
    t.d_minus = 0.5 * (root - 1.0 - t.zeta_v);
    // D_- can land at -1e-17 when it should be 0.
    if (t.d_minus < 0.0 && t.d_minus > -1e-12) t.d_minus = 0.0;
    if (t.d_plus < 0.0 && t.d_plus > -1e-12) t.d_plus = 0.0;
    if (t.d_minus < 0.0 || t.d_plus < 0.0 || t.zeta_n + t.zeta_v < 0.0) {
        std::ostringstream msg;
        msg << "entanglement-assisted bound undefined: negative occupancy (D+ = " << t.d_plus
            << ", D- = " << t.d_minus << ")";
        throw RegimeError(msg.str());
    }
    return t;
}

double ea_per_mode(const CapacityInputs& in, EaMode mode) {
    const EaTerms t = ea_terms(in, mode);
    return g_entropy(t.zeta_n) + g_entropy(t.zeta_n + t.zeta_v) - g_entropy(t.d_plus) - g_entropy(t.d_minus);
}

double ea_capacity(const CapacityInputs& in, EaMode mode) { return in.bandwidth * ea_per_mode(in, mode); }

double fading_capacity(const CapacityInputs& in, const EmpiricalDensity& density, double noise_level) {
    in.validate();
    density.require_normalized();
    if (!(noise_level > 0) || !std::isfinite(noise_level)) throw ParameterError("noise level must be > 0");
    const double snr = in.power / (noise_level * in.bandwidth);
    double c = 0.0;
    for (std::size_t i = 0; i < density.bins(); ++i) {
        const double r = density.midpoint(i);
        c += std::log2(1.0 + r * r * snr) * density.probabilities[i];
    }
    return in.bandwidth * c;
}

}  // namespace qho
