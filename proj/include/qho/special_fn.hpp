#pragma once

#include <vector>

namespace qho {

/// Largest oscillator index accepted by the recurrences below.
inline constexpr int kMaxOscillatorIndex = 64;

/// Oscillator quantum number (photon number) in [0, kMaxOscillatorIndex].
class OscillatorIndex {
public:
    OscillatorIndex() = default;
    // Implicit so that integer literals read naturally at call sites.
    OscillatorIndex(int n);  // NOLINT(google-explicit-constructor)

    [[nodiscard]] int value() const { return n_; }
    operator int() const { return n_; }  // NOLINT(google-explicit-constructor)

private:
    int n_ = 0;
};

/// Physicists' Hermite polynomial H_n(x), H_{n+1} = 2x H_n - 2n H_{n-1}.
double hermite_poly(OscillatorIndex n, double x);

/// Normalized harmonic-oscillator eigenfunction
///   phi_n(b) = H_n(b) exp(-b^2/2) / sqrt(2^n n! sqrt(pi)).
///
/// Evaluated through the normalized recurrence
///   phi_{k+1} = sqrt(2/(k+1)) b phi_k - sqrt(k/(k+1)) phi_{k-1},
/// so 2^n n! never materializes. Symmetric in b up to the parity sign.
double ho_wavefunction(OscillatorIndex n, double b);

/// H_n(x) / sqrt(2^n n! sqrt(pi)): phi_n without the Gaussian factor.
double normalized_hermite(OscillatorIndex n, double x);

/// All of phi_0(b) .. phi_n(b) in one pass.
std::vector<double> ho_wavefunctions(OscillatorIndex n, double b);

/// Gauss-Hermite rule for weight exp(-x^2): sum w_i f(x_i) ~ int exp(-x^2) f(x) dx.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes by Newton iteration on the normalized Hermite recurrence; valid
/// for any order >= 1 (tested to 512).
GaussHermiteRule gauss_hermite(int order);

}  // namespace qho
