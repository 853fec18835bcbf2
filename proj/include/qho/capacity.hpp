#pragma once

#include "qho/envelope_stats.hpp"

namespace qho {

/// Physical link parameters shared by the capacity bounds (SI units).
struct CapacityInputs {
    double bandwidth = 1.0;     // B, Hz
    double power = 0.0;         // Upsilon, W
    double noise_psd = 1.0;     // N0, W/Hz
    double photon_energy = 1.0; // hbar f, J
    double quantum_noise = 0.0; // N; noise occupancy zeta_n = N / hbar f
    double chi = 1.0;           // amplification (> 1) / attenuation (< 1)

    void validate() const;
};

/// g(x) = (1 + x) log2(1 + x) - x log2 x, with g(0) = 0.
double g_entropy(double x);

/// B log2(1 + Upsilon / (N0 B)).
double shannon_capacity(const CapacityInputs& in);

// The Fock, Holevo and entanglement-assisted bounds are per-mode entropies.
// The `*_capacity` functions scale them by B to report bits/s; the
// `*_per_mode` variants return the bare bracketed expressions.

double fock_per_mode(const CapacityInputs& in);
double fock_capacity(const CapacityInputs& in);

double holevo_per_mode(const CapacityInputs& in);
double holevo_capacity(const CapacityInputs& in);

enum class EaMode {
    as_printed,  // zeta_n = N / hbar f (noise), zeta_v = Upsilon chi / (B hbar f)
    standard,    // zeta_n = signal occupancy, zeta_n + zeta_v = output occupancy
};

struct EaTerms {
    double zeta_n = 0;
    double zeta_v = 0;
    double discriminant = 0;
    double d_plus = 0;
    double d_minus = 0;
};

/// Occupancies and D_+- of the entanglement-assisted bound. Throws RegimeError
/// (naming the chi threshold) when the discriminant is negative.
EaTerms ea_terms(const CapacityInputs& in, EaMode mode = EaMode::as_printed);
double ea_per_mode(const CapacityInputs& in, EaMode mode = EaMode::as_printed);
double ea_capacity(const CapacityInputs& in, EaMode mode = EaMode::as_printed);

/// Fading-averaged capacity: sum over bins of B log2(1 + r^2 Upsilon / (N B)) p,
/// r the bin midpoint and N the hybrid noise level.
double fading_capacity(const CapacityInputs& in, const EmpiricalDensity& density, double noise_level);

}  // namespace qho
