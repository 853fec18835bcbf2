#include "qho/ck_solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "qho/errors.hpp"

namespace qho {

namespace {

const char* branch_name(Branch b) { return b == Branch::plus ? "+" : "-"; }

}  // namespace

double CKInputs::beta() const { return std::sqrt(4.0 * std::numbers::pi / (omega * quantization)); }

void CKInputs::validate() const {
    auto positive = [](double v) { return v > 0 && std::isfinite(v); };
    if (!positive(omega) || !positive(omega_c) || !positive(quantization)) {
        throw ParameterError("CK inputs omega, omega_c, V must be positive and finite");
    }
    if (!(beta() > 1e-9)) throw ParameterError("beta = sqrt(4 pi / (omega V)) must exceed 1e-9");
}

CKParams derive_ck_params(const CKInputs& in) {
    in.validate();
    const double w = in.omega, wc = in.omega_c, beta = in.beta();
    const double pm = in.branch == Branch::plus ? 1.0 : -1.0;

    CKParams p;
    p.branch = in.branch;
    p.epsilon = (w * w - wc * wc + beta * beta * w) / (2.0 * beta * std::sqrt(w) * wc);
    const double root = std::sqrt(p.epsilon * p.epsilon + 1.0);
    p.alpha = std::sqrt(wc / w) * (p.epsilon + pm * root);
    p.gamma = pm * 0.5 * std::sqrt(w / wc) / root;
    p.lambda = 1.0 + p.alpha * p.alpha * wc / w - 2.0 * beta * p.alpha * std::sqrt(wc) / w + beta * beta / w;
    p.sigma = 1.0 / (1.0 + p.alpha * p.alpha * w / wc);
    p.kappa = p.sigma + 2.0 * beta * p.epsilon * p.gamma * p.gamma / std::sqrt(w) -
              2.0 * beta * p.gamma / std::sqrt(wc) * (1.0 + p.alpha * p.gamma);
    p.g = -pm * beta * std::sqrt(w) / (2.0 * p.sigma * wc * root);
    p.s_e = 1.0 - beta * wc / std::pow(w, 1.5) * (p.epsilon - pm * root) + beta * beta / w;

    if (!(p.kappa > 0) || !(p.lambda > 0)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "CK Hamiltonian not diagonalizable on branch " << branch_name(in.branch) << ": kappa = " << p.kappa
            << ", Lambda = " << p.lambda;
        throw NonDiagonalizableError(msg.str());
    }
    p.r_w = std::sqrt(1.0 / (p.sigma * p.kappa));
    p.s_w = std::sqrt(p.lambda / p.sigma);
    return p;
}

CKParams derive_ck_params_auto(CKInputs in) {
    std::string reasons;
    for (Branch b : {in.branch, in.branch == Branch::plus ? Branch::minus : Branch::plus}) {
        in.branch = b;
        try {
            CKParams p = derive_ck_params(in);
            if (p.g >= 0 && p.s_e >= 0) return p;
            reasons += std::string(" branch ") + branch_name(b) + ": G = " + std::to_string(p.g) +
                       ", S_e = " + std::to_string(p.s_e) + ";";
        } catch (const NonDiagonalizableError& e) {
            reasons += std::string(" ") + e.what() + ";";
        }
    }
    throw BranchError("no branch yields a valid CK spectrum:" + reasons);
}

double energy_level(OscillatorIndex n1, OscillatorIndex n2, const CKParams& p, const CKInputs& in) {
    if (p.g < 0 || p.s_e < 0) {
        std::ostringstream msg;
        msg << "negative energy scale on branch " << branch_name(p.branch) << " (G = " << p.g << ", S_e = " << p.s_e
            << "); switch the sign selector";
        throw BranchError(msg.str());
    }
    return in.omega_c * (n2 + 0.5) * std::sqrt(p.g) + in.omega * (n1 + 0.5) * std::sqrt(p.s_e);
}

double ck_factor(OscillatorIndex n, double t, double width) {
    if (!(width > 0)) throw DomainError("wavefunction width must be positive");
    // C_n e^{-w t^2/2} H_n(t sqrt(w)) = w^{1/4} phi_n(t sqrt(w)).
    return std::sqrt(std::sqrt(width)) * ho_wavefunction(n, t * std::sqrt(width));
}

double ck_wavefunction(OscillatorIndex n1, OscillatorIndex n2, double x, double eta, const CKParams& p) {
    return ck_factor(n2, x, p.r_w) * ck_factor(n1, eta, p.s_w);
}

std::complex<double> ck_joint_wavefunction_fixed(OscillatorIndex n1, OscillatorIndex n2, double x, double eta,
                                                 const CKParams& p, int nodes) {
    if (nodes < 64) throw DomainError("joint wavefunction quadrature needs >= 64 nodes");
    if (!(p.r_w > 0) || !(p.s_w > 0)) throw DomainError("CK widths R_w, S_w must be positive");
    const GaussHermiteRule rule = gauss_hermite(nodes);
    const double sqrt_r = std::sqrt(p.r_w);
    const double sqrt_s = std::sqrt(p.s_w);
    const double c1 = std::sqrt(std::sqrt(p.s_w)) / std::sqrt(std::sqrt(std::numbers::pi));
    const double c2 = std::sqrt(std::sqrt(p.r_w)) / std::sqrt(std::sqrt(std::numbers::pi));
    std::complex<double> acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        // xi = sqrt(2) u turns exp(-xi^2/2) into the rule's exp(-u^2).
        const double xi = std::numbers::sqrt2 * rule.nodes[i];
        const double shifted = eta + xi * p.gamma * sqrt_r;
        // H_n = sqrt(2^n n! sqrt(pi)) * normalized_hermite; the sqrt(2^n n!)
        // factors cancel against C_n, leaving pi^{1/4} per Hermite factor.
        const double h2 = normalized_hermite(n2, xi);
        const double h1 = ho_wavefunction(n1, sqrt_s * shifted);
        const double phase = x * (xi * sqrt_r - p.sigma * eta);
        acc += rule.weights[i] * h2 * h1 * std::polar(1.0, phase);
    }
    acc *= std::numbers::sqrt2 * c1 * c2 * std::sqrt(std::numbers::pi);
    // (-i)^{n2}
    static const std::complex<double> minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return acc * minus_i_pow[n2 % 4];
}

std::complex<double> ck_joint_wavefunction(OscillatorIndex n1, OscillatorIndex n2, double x, double eta,
                                           const CKParams& p, const QuadratureSpec& spec) {
    const std::complex<double> coarse = ck_joint_wavefunction_fixed(n1, n2, x, eta, p, spec.nodes);
    const std::complex<double> fine = ck_joint_wavefunction_fixed(n1, n2, x, eta, p, 2 * spec.nodes);
    const double scale = std::max(std::abs(fine), 1e-300);
    if (std::abs(fine - coarse) > spec.tolerance * std::max(scale, 1.0)) {
        std::ostringstream msg;
        msg << "joint wavefunction quadrature not converged at " << spec.nodes << " nodes: |change| = "
            << std::abs(fine - coarse);
        throw AccuracyError(msg.str());
    }
    return fine;
}

CKEvolution::CKEvolution(CKCoefficients coeffs, const CKParams& p, const CKInputs& in) : params_(p) {
    for (const auto& [key, u] : coeffs) {
        if (u == std::complex<double>{}) continue;
        terms_.push_back({key.first, key.second, u, energy_level(key.first, key.second, p, in)});
    }
}

std::complex<double> CKEvolution::operator()(double x, double eta, double tau) const {
    std::complex<double> acc{};
    for (const Term& t : terms_) {
        acc += t.u * std::polar(1.0, -t.energy * tau) * ck_wavefunction(t.n1, t.n2, x, eta, params_);
    }
    return acc;
}

double CKEvolution::total_probability(double tau) const {
    double total = 0.0;
    for (const Term& t : terms_) total += std::norm(t.u * std::polar(1.0, -t.energy * tau));
    return total;
}

double CKEvolution::energy(int n1, int n2) const {
    for (const Term& t : terms_) {
        if (t.n1 == n1 && t.n2 == n2) return t.energy;
    }
    throw DomainError("no term (" + std::to_string(n1) + ", " + std::to_string(n2) + ") in the superposition");
}

CKEvolution ck_evolve(CKCoefficients coeffs, const CKParams& p, const CKInputs& in) {
    double total = 0.0;
    for (const auto& [key, u] : coeffs) {
        OscillatorIndex(key.first);
        OscillatorIndex(key.second);
        total += std::norm(u);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw NormalizationError("superposition coefficients must satisfy sum |U|^2 = 1 (got " +
                                 std::to_string(total) + ")");
    }
    return CKEvolution(std::move(coeffs), p, in);
}

}  // namespace qho
