#pragma once

#include <complex>
#include <functional>
#include <map>
#include <utility>

#include "qho/special_fn.hpp"

namespace qho {

/// Sign selector for the +/- choices in alpha, gamma, G and S_e. The upper
/// sign of every pair belongs to `plus`.
enum class Branch { plus, minus };

struct CKInputs {
    double omega = 1;    // classical-information frequency
    double omega_c = 1;  // oscillator frequency
    double quantization = 1;  // V
    Branch branch = Branch::minus;

    /// beta = sqrt(4 pi / (omega V)).
    [[nodiscard]] double beta() const;
    void validate() const;
};

/// Constants of the diagonalized Caldirola-Kanai Hamiltonian.
struct CKParams {
    double alpha = 0, gamma = 0, epsilon = 0;
    double lambda = 0, sigma = 0, kappa = 0;
    double r_w = 0;  // sqrt(1 / (sigma kappa)), width of the x factor
    double s_w = 0;  // sqrt(Lambda / sigma), width of the eta factor
    double g = 0;    // G of the energy levels
    double s_e = 0;  // S of the energy levels
    Branch branch = Branch::minus;
};

/// Evaluates the coupling algebra. Throws NonDiagonalizableError when
/// kappa <= 0 or Lambda <= 0 (the message carries the computed values).
CKParams derive_ck_params(const CKInputs& in);

/// Tries the requested branch first, then the other; returns the first one
/// with kappa, Lambda > 0 and G, S_e >= 0. Throws BranchError otherwise.
CKParams derive_ck_params_auto(CKInputs in);

/// e_{n1,n2} = omega_c (n2 + 1/2) sqrt(G) + omega (n1 + 1/2) sqrt(S_e).
double energy_level(OscillatorIndex n1, OscillatorIndex n2, const CKParams& p, const CKInputs& in);

/// C_n exp(-w t^2 / 2) H_n(t sqrt(w)), C_n = w^{1/4} / sqrt(2^n n! sqrt(pi)).
double ck_factor(OscillatorIndex n, double t, double width);

/// psi'_{n1,n2}(x, eta) = psi'_{n2}(x; R_w) psi'_{n1}(eta; S_w).
double ck_wavefunction(OscillatorIndex n1, OscillatorIndex n2, double x, double eta, const CKParams& p);

struct QuadratureSpec {
    int nodes = 64;
    double tolerance = 1e-6;  // allowed relative change when nodes double
};

/// Fourier-integral form of the joint wavefunction, integrated over xi by
/// Gauss-Hermite quadrature against exp(-xi^2 / 2). Throws AccuracyError when
/// doubling the node count moves the result by more than `spec.tolerance`.
std::complex<double> ck_joint_wavefunction(OscillatorIndex n1, OscillatorIndex n2, double x, double eta,
                                           const CKParams& p, const QuadratureSpec& spec = {});

/// Same integral at a fixed node count, no convergence check.
std::complex<double> ck_joint_wavefunction_fixed(OscillatorIndex n1, OscillatorIndex n2, double x, double eta,
                                                 const CKParams& p, int nodes);

using CKCoefficients = std::map<std::pair<int, int>, std::complex<double>>;

/// Superposition sum_{n1,n2} U e^{-i e_{n1,n2} tau} psi'_{n1,n2}(x, eta).
class CKEvolution {
public:
    CKEvolution(CKCoefficients coeffs, const CKParams& p, const CKInputs& in);

    [[nodiscard]] std::complex<double> operator()(double x, double eta, double tau) const;
    /// sum |U e^{-i e tau}|^2.
    [[nodiscard]] double total_probability(double tau) const;
    [[nodiscard]] double energy(int n1, int n2) const;

private:
    struct Term {
        int n1, n2;
        std::complex<double> u;
        double energy;
    };
    std::vector<Term> terms_;
    CKParams params_;
};

/// Throws NormalizationError when sum |U|^2 differs from 1 by more than 1e-9.
CKEvolution ck_evolve(CKCoefficients coeffs, const CKParams& p, const CKInputs& in);

}  // namespace qho
