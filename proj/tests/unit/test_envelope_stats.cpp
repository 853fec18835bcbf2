#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "qho/config.hpp"
#include "qho/envelope_stats.hpp"
#include "qho/pipeline.hpp"
#include "qho/errors.hpp"

using namespace qho;

namespace {

constexpr double kLambda = 1300e-9;

EnvelopeSeries series_of(std::vector<double> v) {
    return EnvelopeSeries{Axis{0.0, kLambda / 8, v.size()}, std::move(v), kLambda};
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Deterministic bumpy positive series.
std::vector<double> bumpy(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = static_cast<double>(i);
        v[i] = 2.0 + std::sin(0.37 * z) + 0.5 * std::cos(0.011 * z) + 0.2 * std::sin(1.9 * z);
    }
    return v;
}

}  // namespace

TEST_CASE("received energy of simple fields") {
    const Axis ax = Axis::centered(1.0, 5);
    const Axis az{0.0, 0.1, 10};
    FieldGrid ones(ax, ax, az);
    for (Complex& v : ones.data()) v = 1.0;
    for (double e : received_energy(ones, Probe{0.2, -0.3}, kLambda).values) CHECK(e == 0.5);

    FieldGrid phase(ax, ax, az);
    for (std::size_t iz = 0; iz < az.count; ++iz)
        for (std::size_t iy = 0; iy < 5; ++iy)
            for (std::size_t ix = 0; ix < 5; ++ix) phase.at(ix, iy, iz) = std::polar(1.0, 0.7 * double(iz));
    for (double e : received_energy(phase, Probe{0.0, 0.0}, kLambda).values) CHECK(e == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_NOTHROW(received_energy(ones, Probe{1.4, 0.0}, kLambda));
    CHECK_THROWS_AS(received_energy(ones, Probe{1.6, 0.0}, kLambda), ProbeError);
}

TEST_CASE("received energy picks the nearest node") {
    const Axis ax = Axis::centered(1.0, 3);
    FieldGrid f(ax, ax, Axis{0.0, 1.0, 1});
    f.at(2, 0, 0) = Complex(0.0, 2.0);
    CHECK(received_energy(f, Probe{0.8, -0.9}, kLambda).values[0] == 2.0);
}

TEST_CASE("vector field energy") {
    const Axis ax = Axis::centered(1.0, 3);
    VectorField v{FieldGrid(ax, ax, Axis{0.0, 1.0, 2}), FieldGrid(ax, ax, Axis{0.0, 1.0, 2})};
    for (Complex& c : v.ex.data()) c = Complex(3.0, 0.0);
    for (Complex& c : v.ez.data()) c = Complex(0.0, 4.0);
    for (double e : received_energy(v, Probe{0.0, 0.0}, kLambda).values) CHECK(e == 12.5);
}

TEST_CASE("window rounding") {
    CHECK(window_samples(4.0, kLambda, kLambda / 8) == 32);
    CHECK(window_samples(150.0, kLambda, kLambda / 8) == 1200);
    CHECK(window_samples(2.5, 1.0, 1.0) == 2);
    CHECK(window_samples(3.5, 1.0, 1.0) == 4);
    CHECK_THROWS_AS(window_samples(0.01, 1.0, 1.0), InvariantError);
}

TEST_CASE("moving average examples") {
    const std::vector<double> c(40, 3.25);
    CHECK(moving_average(c, 7) == c);
    CHECK(moving_average(c, 8) == c);

    std::vector<double> impulse(21, 0.0);
    impulse[10] = 1.0;
    const auto m = moving_average(impulse, 5);
    for (std::size_t i = 8; i <= 12; ++i) CHECK(m[i] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(m[7] == 0.0);
    CHECK(m[13] == 0.0);

    std::vector<double> alt(30);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
    const auto z = moving_average(alt, 6);
    for (std::size_t i = 3; i + 3 < alt.size(); ++i) CHECK(z[i] == 0.0);

    CHECK_THROWS_AS(moving_average(std::vector<double>(4, 1.0), 5), LengthError);
    CHECK_THROWS_AS(moving_average(std::vector<double>(4, 1.0), 0), InvariantError);
}

TEST_CASE("moving average stays within the input range and keeps length") {
    const auto v = bumpy(500);
    for (std::size_t w : {1, 2, 5, 32, 100}) {
        const auto m = moving_average(v, w);
        REQUIRE(m.size() == v.size());
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        for (double x : m) {
            CHECK(x >= *lo - 1e-12);
            CHECK(x <= *hi + 1e-12);
        }
    }
    CHECK(moving_average(v, 1) == v);
}

TEST_CASE("decomposition of a constant") {
    const auto d = decompose_envelope(series_of(std::vector<double>(2000, 9.0)));
    CHECK(d.short_window == 32);
    CHECK(d.long_window == 1200);
    for (double s : d.small_scale) CHECK(s == doctest::Approx(3.0).epsilon(1e-15));
    for (double l : d.large_scale) CHECK(l == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("decomposition homogeneity") {
    const auto v = bumpy(3000);
    std::vector<double> scaled(v);
    for (double& x : scaled) x *= 4.0;
    const auto a = decompose_envelope(series_of(v));
    const auto b = decompose_envelope(series_of(scaled));
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(b.small_scale[i] == doctest::Approx(2.0 * a.small_scale[i]).epsilon(1e-12));
        CHECK(b.large_scale[i] == doctest::Approx(a.large_scale[i]).epsilon(1e-12));
    }
}

TEST_CASE("mean-one small-scale normalization") {
    DecompositionOptions o;
    o.norm = SmallScaleNorm::mean_one;
    const auto d = decompose_envelope(series_of(std::vector<double>(2000, 9.0)), o);
    for (double s : d.small_scale) CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("decomposition errors") {
    CHECK_THROWS_AS(decompose_envelope(series_of(std::vector<double>(2000, 0.0))), DegenerateEnvelopeError);
    CHECK_THROWS_AS(decompose_envelope(series_of(std::vector<double>(100, 1.0))), LengthError);
    auto bad = series_of(std::vector<double>(2000, 1.0));
    bad.values[3] = -1.0;
    CHECK_THROWS_AS(decompose_envelope(bad), InvariantError);
}

namespace {

/// Fraction (dB) of AC power of `v` above `cutoff` cycles per wavelength.
double band_power_db(const std::vector<double>& v, double step_wavelengths, double cutoff) {
    const std::size_t n = v.size();
    const double mean = sum(v) / double(n);
    double total = 0, high = 0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        std::complex<double> acc{};
        for (std::size_t j = 0; j < n; ++j)
            acc += (v[j] - mean) * std::polar(1.0, -2 * 3.14159265358979 * double(k * j) / double(n));
        const double p = std::norm(acc);
        total += p;
        if (double(k) / (double(n) * step_wavelengths) > cutoff) high += p;
    }
    return 10 * std::log10(high / total);
}

const qho::EnvelopeArtifacts& fig1_envelope() {
    static const qho::EnvelopeArtifacts env = [] {
        const qho::RunConfig cfg = qho::preset_config("fig1");
        return qho::run_envelope(cfg, qho::run_field(cfg));
    }();
    return env;
}

}  // namespace

TEST_CASE("large-scale series carries no short-window ripple") {
    const auto& env = fig1_envelope();
    const double step = env.energy.z.step / env.energy.wavelength;
    CHECK(band_power_db(env.decomposition.large_scale, step, 1.0 / 4.0) < -20.0);
}

// psi / MA_150(psi) removes everything slower than the long window, so its
// remaining variation lies above 1/(150 lambda) by construction. Kept as a
// documented known failure.
TEST_CASE("large-scale series has no power above the long-window frequency" * doctest::should_fail()) {
    const auto& env = fig1_envelope();
    const double step = env.energy.z.step / env.energy.wavelength;
    CHECK(band_power_db(env.decomposition.large_scale, step, 1.0 / 150.0) < -20.0);
}

TEST_CASE("density of a point mass") {
    const EmpiricalDensity d = estimate_density(std::vector<double>(1000, 0.4));
    double inside = 0;
    for (std::size_t i = 0; i < d.bins(); ++i)
        if (d.edges[i] <= 0.4 && 0.4 < d.edges[i + 1]) inside += d.probabilities[i];
    CHECK(inside == 1.0);
    CHECK(d.bins() == 32);
    CHECK(std::abs(sum(d.probabilities) - 1.0) < 1e-12);
}

TEST_CASE("uniform samples with 10 bins") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(10000);
    for (double& x : s) x = u(rng);
    const EmpiricalDensity d = estimate_density(s, BinSpec{10, std::pair{0.0, 1.0}});
    REQUIRE(d.bins() == 10);
    const double sd = std::sqrt(0.1 * 0.9 / 10000.0);
    for (double p : d.probabilities) CHECK(std::abs(p - 0.1) < 3 * sd + 1e-12);
    CHECK(std::abs(sum(d.probabilities) - 1.0) < 1e-12);
    CHECK(d.mean() == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("Freedman-Diaconis bin count") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> s(4000);
    for (double& x : s) x = n(rng);
    const EmpiricalDensity d = estimate_density(s);
    std::vector<double> sorted(s);
    std::sort(sorted.begin(), sorted.end());
    const double width = 2.0 * 1.349 / std::cbrt(4000.0);
    const double expected = (sorted.back() - sorted.front()) / width;
    CHECK(double(d.bins()) == doctest::Approx(expected).epsilon(0.1));
    CHECK(d.normalized);
}

TEST_CASE("density input checks") {
    CHECK_THROWS_AS(estimate_density(std::vector<double>(99, 1.0)), InvariantError);
    std::vector<double> s(200, 1.0);
    s[5] = std::nan("");
    CHECK_THROWS_AS(estimate_density(s), InvariantError);
}

TEST_CASE("pointwise product of uniforms is uniform") {
    EmpiricalDensity u{{0.0, 0.25, 0.5, 0.75, 1.0}, {0.25, 0.25, 0.25, 0.25}, true};
    const EmpiricalDensity p = envelope_density(u, u);
    for (double x : p.probabilities) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(sum(p.probabilities) - 1.0) < 1e-12);
}

TEST_CASE("pointwise product with a point mass") {
    EmpiricalDensity u{{0.0, 0.25, 0.5, 0.75, 1.0}, {0.1, 0.2, 0.3, 0.4}, true};
    EmpiricalDensity atom{{0.5, 0.75}, {1.0}, true};
    const EmpiricalDensity p = envelope_density(u, atom);
    double mass = 0;
    for (std::size_t i = 0; i < p.bins(); ++i)
        if (p.edges[i] >= 0.5 - 1e-12 && p.edges[i + 1] <= 0.75 + 1e-12) mass += p.probabilities[i];
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("disjoint supports are an empty product") {
    EmpiricalDensity a{{0.0, 1.0}, {1.0}, true};
    EmpiricalDensity b{{2.0, 3.0}, {1.0}, true};
    CHECK_THROWS_AS(envelope_density(a, b), EmptyProductError);
    EmpiricalDensity raw{{0.0, 1.0}, {0.5}, false};
    CHECK_THROWS_AS(envelope_density(raw, a), NormalizationError);
}

TEST_CASE("product-of-variables mode") {
    // X, Y uniform on [1, 2]: E[XY] = 2.25.
    std::vector<double> e, p;
    for (int i = 0; i <= 50; ++i) e.push_back(1.0 + i / 50.0);
    p.assign(50, 1.0 / 50.0);
    EmpiricalDensity u{e, p, true};
    const EmpiricalDensity xy = envelope_density(u, u, DensityProduct::product_variable);
    CHECK(std::abs(sum(xy.probabilities) - 1.0) < 1e-12);
    CHECK(xy.mean() == doctest::Approx(2.25).epsilon(1e-3));
    CHECK(xy.edges.front() >= 1.0 - 1e-12);
    CHECK(xy.edges.back() <= 4.0 + 1e-12);
}
