// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qho/capacity.hpp"
#include "qho/ck_solver.hpp"
#include "qho/config.hpp"
#include "qho/envelope_stats.hpp"
#include "qho/field_model.hpp"
#include "qho/io.hpp"
#include "qho/noise_model.hpp"
#include "qho/pipeline.hpp"
#include "qho/special_fn.hpp"
#include "qho/verify.hpp"

#ifndef QHO_CLI_PATH
#error "QHO_CLI_PATH must point at the qho executable"
#endif

namespace fs = std::filesystem;
using namespace qho;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Accumulates sub-check results into one line of detail.
struct Report {
    Outcome out;
    void check(bool ok, const std::string& what) {
        out.pass = out.pass && ok;
        if (!out.detail.empty()) out.detail += "; ";
        out.detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + QHO_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome orthonormality() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    const double err = orthonormality_error(6);
    const double t = seconds_since(t0);
    r.check(err < 1e-8, fmt("max |<phi_m,phi_n> - delta| = %.3e", err));
    r.check(t < 1.0, fmt("%.3f s", t));
    return r.out;
}

Outcome residuals() {
    Report r;
    {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0;
        for (int l = 0; l <= 2; ++l)
            for (int m = 0; m <= 2; ++m)
                worst = std::max(worst, std::abs(tem_residual_study(l, m, 20e-6, 1300e-9).order - 2.0));
        const double t = seconds_since(t0);
        r.check(worst <= 0.3 && t < 30.0, fmt("TEM worst |order - 2| = %.3f in %.1f s", worst, t));
    }
    for (const char* name : {"fig1", "fig2"}) {
        const MediumParams p = preset_config(name).medium_params();
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0;
        for (int level : {2, 3, 4}) worst = std::max(worst, std::abs(medium_residual_study(level, p).order - 2.0));
        const double t = seconds_since(t0);
        r.check(worst <= 0.3 && t < 30.0, std::string(name) + fmt(" worst |order - 2| = %.3f in %.1f s", worst, t));
    }
    return r.out;
}

Outcome norm_conservation() {
    Report r;
    const RunConfig cfg = preset_config("fig1");
    const MediumParams p = cfg.medium_params();
    const NormalModes m = rotation_angle(p);
    const double scale = 1.0 / std::sqrt(std::sqrt(m.omega_x * m.omega_y));
    const Axis ax = Axis::centered(8 * scale, 81);
    const Axis az{0.0, p.wavelength() / 8, 64};
    const ClusterConfig cluster = cfg.cluster_config();
    const FieldGrid f = propagate_cluster(cluster, ax, ax, az, p);
    const double n0 = f.transverse_norm2(0);
    double worst = 0;
    for (std::size_t iz = 1; iz < az.count; ++iz) worst = std::max(worst, std::abs(f.transverse_norm2(iz) / n0 - 1));
    r.check(cluster.n1 == 4 && cluster.n2 == 4, "N_i = 4");
    r.check(worst < 1e-6, fmt("max relative norm drift over 64 slices = %.3e", worst));
    return r.out;
}

EmpiricalDensity point_mass(double at) {
    EmpiricalDensity d;
    d.edges = {at - 1e-12, at + 1e-12};
    d.probabilities = {1.0};
    d.normalized = true;
    return d;
}

Outcome capacity_reductions() {
    Report r;
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double power = 1e-15 * std::pow(10.0, 8.0 * i / 99.0);
        const CapacityInputs in{1e6, power, 1e-19, 1.5e-19, 0.0, 1.0};
        const double f = fock_capacity(in);
        worst = std::max(worst, std::abs(holevo_capacity(in) - f) / f);
    }
    r.check(worst <= 1e-12, fmt("holevo/fock max relative gap = %.3e", worst));
    double fade = 0;
    for (double power : {1e-3, 1.0, 10.0, 1e3}) {
        const CapacityInputs in{1.0, power, 1.0, 1.0, 0.0, 1.0};
        const double s = shannon_capacity(in);
        fade = std::max(fade, std::abs(fading_capacity(in, point_mass(1.0), in.noise_psd) - s) / s);
    }
    r.check(fade <= 1e-9, fmt("point-mass fading vs shannon = %.3e", fade));
    r.check(g_entropy(0.0) == 0.0, "g(0) = 0");
    r.check(std::abs(g_entropy(1.0) - 2.0) <= 1e-12, fmt("g(1) - 2 = %.3e", g_entropy(1.0) - 2.0));
    return r.out;
}

Outcome fading_oracle() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    // Rayleigh envelope with E[r^2] = 2, binned on [0, 8].
    const std::size_t bins = 2000;
    const double top = 8.0;
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
    const CapacityInputs in{1.0, 10.0, 1.0, 1.0, 0.0, 1.0};
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
    const double t = seconds_since(t0);
    r.check(std::abs(c - mc) <= 0.02 * mc, fmt("histogram %.5f vs Monte-Carlo %.5f", c, mc));
    r.check(t < 5.0, fmt("%.2f s", t));
    return r.out;
}

Outcome hybrid_noise() {
    Report r;
    const HybridNoiseSpec spec{0.5, 0.3, 2.5, 1.7};
    const double mean = spec.mu_g + spec.quantum * spec.lambda_p;
    const double var = spec.sigma_g2 + spec.quantum * spec.quantum * spec.lambda_p;
    const double sd = std::sqrt(var);
    // Composite Simpson over mean +- 14 sd.
    const int n = 40000;
    const double lo = mean - 14 * sd, hi = mean + 14 * sd, h = (hi - lo) / n;
    double m0 = 0, m1 = 0, m2 = 0;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + h * i;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double f = hybrid_density(spec, x) * w * h / 3;
        m0 += f;
        m1 += f * x;
        m2 += f * x * x;
    }
    const double qvar = m2 - m1 * m1;
    r.check(std::abs(m0 - 1) <= 1e-9, fmt("integral - 1 = %.3e", m0 - 1));
    r.check(std::abs(m1 - mean) <= 1e-6 && std::abs(qvar - var) <= 1e-6,
            fmt("quadrature mean error %.2e, variance error %.2e", m1 - mean, qvar - var));
    const NoiseMoments mom = hybrid_moments(spec);
    r.check(std::abs(mom.mean - mean) <= 1e-12 && std::abs(mom.variance - var) <= 1e-12, "closed-form moments");
    const std::vector<double> s = sample_hybrid_noise(spec, 1000000, 20240607);
    double sm = 0, sv = 0;
    for (double x : s) sm += x;
    sm /= double(s.size());
    for (double x : s) sv += (x - sm) * (x - sm);
    sv /= double(s.size() - 1);
    r.check(std::abs(sm - mean) <= 0.01 * std::abs(mean) && std::abs(sv - var) <= 0.01 * var,
            fmt("Monte-Carlo mean %.4f, variance %.4f", sm, sv));
    return r.out;
}

Outcome ck_suite() {
    Report r;
    const CKInputs in{1.0, 1.0, 4.0 * kPi, Branch::minus};
    const CKParams p = derive_ck_params_auto(in);
    const GaussHermiteRule rule = gauss_hermite(64);
    double norm = 0;
    for (double w : {p.r_w, p.s_w}) {
        for (int k = 0; k <= 4; ++k) {
            double s = 0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = rule.nodes[i] / std::sqrt(w);
                const double f = ck_factor(k, t, w);
                s += rule.weights[i] * std::exp(rule.nodes[i] * rule.nodes[i]) * f * f / std::sqrt(w);
            }
            norm = std::max(norm, std::abs(s - 1));
        }
    }
    r.check(norm < 1e-6, fmt("normalization max deviation %.3e", norm));
    double second = 0;
    for (int n1 = 0; n1 < 8; ++n1)
        for (int n2 = 0; n2 < 8; ++n2) {
            const double e = energy_level(n1, n2, p, in);
            second = std::max(second, std::abs(energy_level(n1 + 2, n2, p, in) - 2 * energy_level(n1 + 1, n2, p, in) + e));
            second = std::max(second, std::abs(energy_level(n1, n2 + 2, p, in) - 2 * energy_level(n1, n2 + 1, p, in) + e));
        }
    r.check(second < 1e-12, fmt("max second difference %.3e", second));
    double conv = 0;
    for (int n1 = 0; n1 <= 3; ++n1)
        for (int n2 = 0; n2 <= 3; ++n2)
            for (double x : {-3.0, -1.0, 0.5, 3.0})
                for (double eta : {-3.0, 0.0, 2.0})
                    conv = std::max(conv, std::abs(ck_joint_wavefunction_fixed(n1, n2, x, eta, p, 64) -
                                                   ck_joint_wavefunction_fixed(n1, n2, x, eta, p, 128)));
    r.check(conv < 1e-8, fmt("64 -> 128 node change %.3e", conv));
    return r.out;
}

bool svg_ok(const fs::path& p) {
    const std::string s = slurp(p);
    return s.find("<svg") != std::string::npos && s.find("</svg>") != std::string::npos;
}

Outcome pipeline_runs(const fs::path& root) {
    Report r;
    for (const char* name : {"fig1", "fig2"}) {
        const fs::path dir = root / name;
        fs::remove_all(dir);
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = run_cli(std::string("pipeline --preset ") + name + " --out \"" + dir.string() + "\"");
        const double t = seconds_since(t0);
        r.check(rc == 0 && t < 120.0, std::string(name) + fmt(" exit %.0f in %.1f s", rc, t));
        if (rc != 0) continue;

        std::ifstream env(dir / "envelope.csv");
        std::string line;
        std::getline(env, line);
        bool nonneg = line == "z,e_r,e_rs,e_rl";
        std::size_t rows = 0;
        while (std::getline(env, line)) {
            std::stringstream ss(line);
            std::string cell;
            std::getline(ss, cell, ',');
            for (int c = 0; c < 3 && std::getline(ss, cell, ','); ++c) nonneg = nonneg && std::stod(cell) >= 0.0;
            ++rows;
        }
        r.check(nonneg && rows > 0, std::string(name) + " envelopes nonnegative");

        const EmpiricalDensity pr = read_density_csv(dir / "density_envelope.csv");
        double sum = 0;
        for (double q : pr.probabilities) sum += q;
        r.check(std::abs(sum - 1) <= 1e-9, std::string(name) + fmt(" p_R sum - 1 = %.3e", sum - 1));

        bool panels = true;
        for (const char* svg : {"large_scale.svg", "small_scale.svg", "envelope_density.svg"})
            panels = panels && svg_ok(dir / svg);
        r.check(panels, std::string(name) + " three SVG panels (large-scale, small-scale, density)");
    }
    return r.out;
}

Outcome determinism(const fs::path& root) {
    Report r;
    const fs::path a = root / "det_a", b = root / "det_b";
    fs::remove_all(a);
    fs::remove_all(b);
    const std::string common = "pipeline --preset fig1 --seed 12345 --out ";
    const int ra = run_cli(common + "\"" + a.string() + "\"");
    const int rb = run_cli(common + "\"" + b.string() + "\"");
    r.check(ra == 0 && rb == 0, "both runs succeed");
    if (ra != 0 || rb != 0) return r.out;
    std::size_t csvs = 0;
    bool same = true;
    for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        ++csvs;
        same = same && slurp(e.path()) == slurp(b / e.path().filename());
    }
    r.check(same && csvs > 0, fmt("%.0f CSV files bit-identical", double(csvs)));
    const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
    const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
    r.check(ma.at("files") == mb.at("files") && !ma.at("files").empty(), "manifest hashes identical");
    return r.out;
}

double max_rel(const std::vector<double>& got, const std::vector<double>& want) {
    double worst = 0;
    for (std::size_t i = 0; i < got.size(); ++i)
        worst = std::max(worst, std::abs(got[i] - want[i]) / std::max(std::abs(want[i]), 1e-300));
    return worst;
}

Outcome homogeneity() {
    Report r;
    const RunConfig cfg = preset_config("fig1");
    const EnvelopeArtifacts env = run_envelope(cfg, run_field(cfg));
    EnvelopeSeries scaled = env.energy;
    for (double& v : scaled.values) v *= 4.0;
    const EnvelopeDecomposition base = decompose_envelope(env.energy);
    const EnvelopeDecomposition four = decompose_envelope(scaled);
    std::vector<double> doubled = base.small_scale;
    for (double& v : doubled) v *= 2.0;
    const double small = max_rel(four.small_scale, doubled);
    const double large = max_rel(four.large_scale, base.large_scale);
    r.check(small <= 1e-12, fmt("small-scale x2 max relative error %.3e", small));
    r.check(large <= 1e-12, fmt("large-scale unchanged max relative error %.3e", large));
    return r.out;
}

}  // namespace

int main() {
    const fs::path root = fs::current_path() / "acceptance_runs";
    fs::create_directories(root);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"orthonormality", orthonormality},
        {"PDE residual order", residuals},
        {"norm conservation", norm_conservation},
        {"capacity reductions", capacity_reductions},
        {"fading capacity vs Monte-Carlo", fading_oracle},
        {"hybrid noise", hybrid_noise},
        {"CK suite", ck_suite},
        {"pipeline reproduction", [&] { return pipeline_runs(root); }},
        {"determinism", [&] { return determinism(root); }},
        {"envelope homogeneity", homogeneity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
