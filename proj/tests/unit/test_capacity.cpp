#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qho/capacity.hpp"
#include "qho/errors.hpp"

using namespace qho;

namespace {

CapacityInputs base() { return CapacityInputs{1e6, 1e-12, 1e-19, 1.5e-19, 0.0, 1.0}; }

EmpiricalDensity point_mass(double r) { return EmpiricalDensity{{r - 1e-9, r + 1e-9}, {1.0}, true}; }

EmpiricalDensity rayleigh_histogram(std::size_t bins, double top) {
    EmpiricalDensity d;
    for (std::size_t i = 0; i <= bins; ++i) d.edges.push_back(top * double(i) / double(bins));
    double total = 0;
    for (std::size_t i = 0; i < bins; ++i) {
        const double p = std::exp(-d.edges[i] * d.edges[i] / 2) - std::exp(-d.edges[i + 1] * d.edges[i + 1] / 2);
        d.probabilities.push_back(p);
        total += p;
    }
    for (double& p : d.probabilities) p /= total;
    d.normalized = true;
    return d;
}

}  // namespace

TEST_CASE("g entropy") {
    CHECK(g_entropy(0.0) == 0.0);
    CHECK(std::abs(g_entropy(1.0) - 2.0) <= 1e-12);
    CHECK(g_entropy(3.0) == doctest::Approx(4 * std::log2(4.0) - 3 * std::log2(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(g_entropy(-0.1), InvariantError);
    for (double x = 0.05; x < 20; x += 0.05) CHECK(g_entropy(x + 0.05) - 2 * g_entropy(x) + g_entropy(x - 0.05) <= 0.0);
}

TEST_CASE("input validation") {
    CapacityInputs in = base();
    in.bandwidth = 0;
    CHECK_THROWS_AS(in.validate(), InvariantError);
    in = base();
    in.power = -1;
    CHECK_THROWS_AS(in.validate(), InvariantError);
    in = base();
    in.photon_energy = 0;
    CHECK_THROWS_AS(in.validate(), InvariantError);
}

TEST_CASE("Shannon capacity") {
    CapacityInputs in{1.0, 10.0, 1.0, 1.0, 0.0, 1.0};
    CHECK(shannon_capacity(in) == doctest::Approx(std::log2(11.0)).epsilon(1e-15));
    in.power = 0;
    CHECK(shannon_capacity(in) == 0.0);
    in.power = 1;
    in.noise_psd = 0;
    CHECK_THROWS_AS(shannon_capacity(in), InfiniteCapacityError);
}

TEST_CASE("Fock bound is B g(Upsilon / (B hbar f))") {
    const CapacityInputs in = base();
    const double n = in.power / (in.bandwidth * in.photon_energy);
    CHECK(fock_per_mode(in) == doctest::Approx(g_entropy(n)).epsilon(1e-15));
    CHECK(fock_capacity(in) == doctest::Approx(in.bandwidth * g_entropy(n)).epsilon(1e-15));
}

TEST_CASE("Holevo reduces to Fock without noise") {
    for (int i = 0; i < 100; ++i) {
        const double t = i / 99.0;
        const CapacityInputs in{std::pow(10.0, 3 + 6 * t), std::pow(10.0, -15 + 9 * t), 1e-19,
                                std::pow(10.0, -20 + 2 * t), 0.0, 1.0};
        const double f = fock_capacity(in);
        CHECK(std::abs(holevo_capacity(in) - f) <= 1e-12 * std::max(f, 1e-300));
    }
}

TEST_CASE("capacities are non-negative and nondecreasing in power") {
    CapacityInputs in = base();
    in.quantum_noise = 0.5 * in.photon_energy;
    double prev[4] = {0, 0, 0, 0};
    for (int i = 0; i < 100; ++i) {
        in.power = 1e-14 * std::pow(10.0, i * 6.0 / 99.0);
        const double c[4] = {shannon_capacity(in), fock_capacity(in), holevo_capacity(in), ea_capacity(in, EaMode::standard)};
        for (int k = 0; k < 4; ++k) {
            CHECK(c[k] >= 0.0);
            CHECK(c[k] >= prev[k] - 1e-12 * std::abs(prev[k]));
            prev[k] = c[k];
        }
    }
}

TEST_CASE("Holevo is monotone in chi") {
    CapacityInputs in = base();
    in.quantum_noise = 0.3 * in.photon_energy;
    double prev = -1;
    for (double chi = 0.1; chi < 5.0; chi += 0.1) {
        in.chi = chi;
        const double c = holevo_capacity(in);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("entanglement-assisted bound as printed") {
    CapacityInputs in = base();
    in.quantum_noise = 0.0;
    const EaTerms t = ea_terms(in);
    CHECK(t.zeta_n == 0.0);
    CHECK(t.d_plus == doctest::Approx(t.zeta_v).epsilon(1e-12));
    CHECK(t.d_minus == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ea_capacity(in) == doctest::Approx(0.0).epsilon(1e-12));

    // zeta_v = 0, chi = 1: the radicand is exactly 1 so D+- = 0.
    in.power = 0;
    in.quantum_noise = 2.0 * in.photon_energy;
    const EaTerms z = ea_terms(in);
    CHECK(z.discriminant == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(z.d_plus) < 1e-12);
    CHECK(std::abs(z.d_minus) < 1e-12);
    CHECK(ea_capacity(in) == doctest::Approx(2 * in.bandwidth * g_entropy(2.0)).epsilon(1e-12));
}

TEST_CASE("entanglement-assisted bound near chi -> 0") {
    CapacityInputs in = base();
    in.quantum_noise = 1.5 * in.photon_energy;
    in.chi = 1e-9;
    const EaTerms t = ea_terms(in);
    // Independent evaluation of the printed radicals.
    const double zn = 1.5, zv = in.power * in.chi / (in.bandwidth * in.photon_energy);
    const double disc = (2 * zn + zv + 1) * (2 * zn + zv + 1) - 4 * in.chi * zn * (zn + 1);
    const double dp = 0.5 * (std::sqrt(disc) - 1 + zv), dm = 0.5 * (std::sqrt(disc) - 1 - zv);
    CHECK(t.discriminant == doctest::Approx(disc).epsilon(1e-14));
    CHECK(t.d_plus == doctest::Approx(dp).epsilon(1e-12));
    CHECK(t.d_minus == doctest::Approx(dm).epsilon(1e-12));
    const double ref = in.bandwidth * (g_entropy(zn) + g_entropy(zn + zv) - g_entropy(dp) - g_entropy(dm));
    CHECK(ea_capacity(in) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("negative discriminant is a regime error naming chi") {
    CapacityInputs in = base();
    in.power = 0;
    in.quantum_noise = 1.0 * in.photon_energy;
    in.chi = 10.0;
    try {
        ea_capacity(in);
        FAIL("expected RegimeError");
    } catch (const RegimeError& e) {
        CHECK(std::string(e.what()).find("chi") != std::string::npos);
    }
}

TEST_CASE("standard entanglement-assisted mode is positive at zero noise") {
    CapacityInputs in = base();
    CHECK(ea_capacity(in, EaMode::standard) > 0.0);
    CHECK(ea_capacity(in, EaMode::standard) >= holevo_capacity(in));
}

TEST_CASE("fading capacity with a point mass is Shannon") {
    for (double snr : {0.1, 1.0, 10.0, 1000.0}) {
        CapacityInputs in{2e6, 0.0, 1e-19, 1.5e-19, 0.0, 1.0};
        in.power = snr * in.noise_psd * in.bandwidth;
        const double f = fading_capacity(in, point_mass(1.0), in.noise_psd);
        const double s = shannon_capacity(in);
        CHECK(std::abs(f - s) <= 1e-9 * s);
    }
}

TEST_CASE("fading capacity under Rayleigh fading matches Monte-Carlo") {
    const CapacityInputs in{1.0, 10.0, 1.0, 1.0, 0.0, 1.0};
    const EmpiricalDensity d = rayleigh_histogram(2000, 8.0);
    const double c = fading_capacity(in, d, 1.0);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n(0.0, 1.0);
    double mc = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double a = n(rng), b = n(rng);
        mc += std::log2(1 + (a * a + b * b) * 10.0);
    }
    mc /= draws;
    CHECK(std::abs(c - mc) <= 0.02 * mc);
    // Jensen: E[log(1 + r^2 s)] <= log(1 + E[r^2] s).
    CHECK(c <= std::log2(1 + d.second_moment() * 10.0));
}

TEST_CASE("fading capacity input checks") {
    const CapacityInputs in{1.0, 10.0, 1.0, 1.0, 0.0, 1.0};
    EmpiricalDensity raw{{0.0, 1.0}, {0.4}, false};
    CHECK_THROWS_AS(fading_capacity(in, raw, 1.0), NormalizationError);
    CHECK_THROWS_AS(fading_capacity(in, point_mass(1.0), 0.0), InvariantError);
}
