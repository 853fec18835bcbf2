#include "qho/special_fn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qho/errors.hpp"

namespace qho {

OscillatorIndex::OscillatorIndex(int n) : n_(n) {
    if (n < 0 || n > kMaxOscillatorIndex) {
        throw BoundsError("oscillator index " + std::to_string(n) + " outside [0, " +
                          std::to_string(kMaxOscillatorIndex) + "]");
    }
}

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

}  // namespace

double hermite_poly(OscillatorIndex n, double x) {
    require_finite(x, "hermite_poly argument");
    double h_prev = 1.0;
    if (n == 0) return h_prev;
    double h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double h_next = 2.0 * x * h - 2.0 * k * h_prev;
        h_prev = h;
        h = h_next;
    }
    return h;
}

std::vector<double> ho_wavefunctions(OscillatorIndex n, double b) {
    require_finite(b, "ho_wavefunction argument");
    std::vector<double> out(static_cast<std::size_t>(n.value()) + 1);
    // Evaluate at |b| and restore parity so phi_n(-b) = (-1)^n phi_n(b) bitwise.
    const double a = std::abs(b);
    out[0] = std::exp(-0.5 * a * a) / std::sqrt(std::sqrt(std::numbers::pi));
    if (n > 0) out[1] = std::numbers::sqrt2 * a * out[0];
    for (int k = 1; k < n; ++k) {
        out[k + 1] = std::sqrt(2.0 / (k + 1)) * a * out[k] - std::sqrt(double(k) / (k + 1)) * out[k - 1];
    }
    if (b < 0) {
        for (std::size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
    }
    return out;
}

double normalized_hermite(OscillatorIndex n, double x) {
    require_finite(x, "normalized_hermite argument");
    double prev = 0.0;
    double cur = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double ho_wavefunction(OscillatorIndex n, double b) {
    return ho_wavefunctions(n, b).back();
}

namespace {

/// Number of eigenvalues below x of the Hermite Jacobi matrix
/// (zero diagonal, off-diagonal sqrt(j/2)), by Sturm sequence.
int roots_below(int n, double x) {
    int count = 0;
    double q = 1.0;
    for (int j = 0; j < n; ++j) {
        q = -x - (j > 0 ? (0.5 * j) / q : 0.0);
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

/// Orthonormal p_n(z) and p_{n-1}(z) as mantissas sharing exp(log_scale).
struct HermitePair {
    double pn, pn1, log_scale;
};

HermitePair orthonormal_pair(int n, double z) {
    double p1 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
    double p2 = 0.0;
    double log_scale = 0.0;
    for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
        if (std::abs(p1) > 1e150) {
            p1 *= 1e-150;
            p2 *= 1e-150;
            log_scale += 150.0 * std::numbers::ln10;
        }
    }
    return {p1, p2, log_scale};
}

}  // namespace

GaussHermiteRule gauss_hermite(int order) {
    if (order < 1) throw DomainError("Gauss-Hermite order must be >= 1");
    const int n = order;
    GaussHermiteRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const double bound = std::sqrt(2.0 * n + 1.0) + 1.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // i-th largest root: bisect on the Sturm count, then polish by Newton inside the bracket.
        const int k = n - 1 - i;
        double lo = -bound, hi = bound;
        for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (roots_below(n, mid) > k ? hi : lo) = mid;
        }
        double z = 0.5 * (lo + hi);
        for (int it = 0; it < 4; ++it) {
            const HermitePair p = orthonormal_pair(n, z);
            const double next = z - p.pn / (std::sqrt(2.0 * n) * p.pn1);
            if (!(next > lo && next < hi)) break;
            z = next;
        }
        if (2 * i + 1 == n) z = 0.0;
        const HermitePair p = orthonormal_pair(n, z);
        // w = 1 / (n p_{n-1}^2), in log space.
        const double w = std::exp(-2.0 * (std::log(std::abs(p.pn1)) + p.log_scale)) / n;
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace qho
