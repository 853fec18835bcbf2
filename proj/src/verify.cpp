#include "qho/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>

#include "qho/capacity.hpp"
#include "qho/ck_solver.hpp"
#include "qho/noise_model.hpp"
#include "qho/special_fn.hpp"

namespace qho {

namespace {

constexpr double kPi = 3.14159265358979323846;

ResidualStudy study(double coarse, double fine) {
    return ResidualStudy{coarse, fine, std::log2(coarse / fine)};
}

std::string fmt(const char* pattern, double a, double b = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

}  // namespace

double orthonormality_error(int max_n, int nodes) {
    const GaussHermiteRule rule = gauss_hermite(nodes);
    double worst = 0.0;
    for (int m = 0; m <= max_n; ++m) {
        for (int n = 0; n <= max_n; ++n) {
            // phi_m phi_n = e^{-x^2} Hm_norm Hn_norm, so the weight absorbs the Gaussian.
            double s = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                s += rule.weights[i] * normalized_hermite(m, rule.nodes[i]) * normalized_hermite(n, rule.nodes[i]);
            }
            worst = std::max(worst, std::abs(s - (m == n ? 1.0 : 0.0)));
        }
    }
    return worst;
}

ResidualStudy tem_residual_study(int l, int m, double rayleigh_range, double wavelength) {
    const double w0 = std::sqrt(wavelength * rayleigh_range / kPi);
    const double half = 4.0 * w0;
    const double hz = rayleigh_range / 64.0;
    const double z0 = 0.5 * rayleigh_range;
    const MediumParams free_space = MediumParams::create(wavelength, 1.0, 1.0, 1.0, 0.0);
    auto residual = [&](std::size_t refine) {
        const std::size_t n = 32 * refine + 1;
        const std::size_t nz = 8 * refine + 1;
        const Axis ax = Axis::centered(half, n);
        const Axis az{z0 - 4.0 * hz, hz / double(refine), nz};
        FieldGrid f(ax, ax, az);
        for (std::size_t iz = 0; iz < nz; ++iz) {
            for (std::size_t iy = 0; iy < n; ++iy) {
                for (std::size_t ix = 0; ix < n; ++ix) {
                    f.at(ix, iy, iz) = tem_mode(l, m, ax[ix], ax[iy], az[iz], rayleigh_range, wavelength);
                }
            }
        }
        return paraxial_residual(f, free_space, ParaxialEquation::free_space);
    };
    return study(residual(1), residual(2));
}

ResidualStudy medium_residual_study(int level, const MediumParams& params, RotationSign rotation,
                                    ZeroPoint zero_point) {
    const NormalModes modes = rotation_angle(params);
    const double scale = 1.0 / std::sqrt(std::min(modes.omega_x, modes.omega_y));
    const double half = (std::sqrt(2.0 * level + 1.0) + 4.0) * scale;
    const double beta = std::abs(propagation_constant(level, level, params, zero_point));
    const double hz = 0.1 / beta;
    PropagationOptions opts;
    opts.rotation = rotation;
    opts.zero_point = zero_point;
    auto residual = [&](std::size_t refine) {
        const Axis ax = Axis::centered(half, 32 * refine + 1);
        const Axis az{0.0, hz / double(refine), 8 * refine + 1};
        return paraxial_residual(propagate_single(level, level, ax, ax, az, params, opts), params,
                                 ParaxialEquation::inhomogeneous);
    };
    return study(residual(1), residual(2));
}

std::vector<CheckResult> run_selftest() {
    std::vector<CheckResult> out;
    auto check = [&](const std::string& name, auto&& body) {
        CheckResult r{name, false, ""};
        try {
            body(r);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        out.push_back(r);
    };

    check("orthonormality n <= 6", [](CheckResult& r) {
        const double err = orthonormality_error(6);
        r.passed = err < 1e-8;
        r.detail = fmt("max deviation %.3e", err);
    });
    check("TEM residual order", [](CheckResult& r) {
        const ResidualStudy s = tem_residual_study(1, 2, 20e-6, 1300e-9);
        r.passed = std::abs(s.order - 2.0) <= 0.3;
        r.detail = fmt("order %.4f (coarse %.3e)", s.order, s.coarse);
    });
    check("medium residual order", [](CheckResult& r) {
        const MediumParams p = MediumParams::from_scaled(1300e-9, 1.45, 1.2, 1.5, 0.25, 1e-6);
        const ResidualStudy s = medium_residual_study(2, p);
        r.passed = std::abs(s.order - 2.0) <= 0.3;
        r.detail = fmt("order %.4f (coarse %.3e)", s.order, s.coarse);
    });
    check("oscillator reductions", [](CheckResult& r) {
        const double e = std::abs(ho_wavefunction(0, 0.0) - std::pow(kPi, -0.25));
        r.passed = e < 1e-15 && hermite_poly(4, 1.5) == -15.0;
        r.detail = fmt("phi_0(0) error %.3e", e);
    });
    check("CK normalization n <= 4", [](CheckResult& r) {
        const CKParams p = derive_ck_params_auto(CKInputs{1.0, 1.0, 4.0 * kPi, Branch::minus});
        const GaussHermiteRule rule = gauss_hermite(64);
        double worst = 0.0;
        for (int n = 0; n <= 4; ++n) {
            // int |w^{1/4} phi_n(t sqrt(w))|^2 dt = 1 for any width w.
            double s = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = rule.nodes[i] / std::sqrt(p.s_w);
                const double f = ck_factor(n, t, p.s_w);
                s += rule.weights[i] * std::exp(rule.nodes[i] * rule.nodes[i]) * f * f / std::sqrt(p.s_w);
            }
            worst = std::max(worst, std::abs(s - 1.0));
        }
        r.passed = worst < 1e-6;
        r.detail = fmt("max deviation %.3e", worst);
    });
    check("capacity reductions", [](CheckResult& r) {
        CapacityInputs in{1e6, 1e-12, 1e-19, 1.5e-19, 0.0, 1.0};
        const double rel = std::abs(holevo_capacity(in) - fock_capacity(in)) / fock_capacity(in);
        r.passed = rel <= 1e-12 && g_entropy(0.0) == 0.0 && std::abs(g_entropy(1.0) - 2.0) <= 1e-12;
        r.detail = fmt("holevo/fock relative gap %.3e, g(1) = %.17g", rel, g_entropy(1.0));
    });
    check("hybrid noise normalization", [](CheckResult& r) {
        const HybridNoiseSpec spec{1.0, 0.0, 3.0, 2.0};
        const NoiseMoments m = hybrid_moments(spec);
        const double sd = std::sqrt(m.variance);
        const int n = 20000;
        const double a = m.mean - 12 * sd, b = m.mean + 12 * sd, h = (b - a) / n;
        double s = 0.5 * (hybrid_density(spec, a) + hybrid_density(spec, b));
        for (int i = 1; i < n; ++i) s += hybrid_density(spec, a + i * h);
        s *= h;
        r.passed = std::abs(s - 1.0) < 1e-9;
        r.detail = fmt("integral - 1 = %.3e", s - 1.0);
    });
    return out;
}

}  // namespace qho
