#include "qho/pipeline.hpp"

#include <cmath>
#include <utility>

#include "qho/errors.hpp"

namespace qho {

using nlohmann::json;

StageError::StageError(std::string stage, ErrorKind kind, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), kind_(kind) {}

ErrorKind classify(const std::exception& e) {
    if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->kind();
    if (dynamic_cast<const ConfigSyntaxError*>(&e)) return ErrorKind::syntax;
    if (dynamic_cast<const IoError*>(&e)) return ErrorKind::io;
    if (dynamic_cast<const InvariantError*>(&e)) return ErrorKind::invariant;
    return ErrorKind::numeric;
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, classify(e), e.what());
    }
}

const char* ea_mode_name(EaMode m) { return m == EaMode::as_printed ? "as_printed" : "standard"; }

json inputs_json(const CapacityInputs& in) {
    return json{{"bandwidth", in.bandwidth},   {"power", in.power},
                {"n0", in.noise_psd},          {"hbar_f", in.photon_energy},
                {"noise_n", in.quantum_noise}, {"chi", in.chi}};
}

json density_summary(const EmpiricalDensity& d) {
    double total = 0;
    for (double p : d.probabilities) total += p;
    return json{{"bins", d.bins()},
                {"support", {d.edges.front(), d.edges.back()}},
                {"probability_sum", total},
                {"mean", d.mean()},
                {"second_moment", d.second_moment()}};
}

void write_field(OutputSink& sink, const RunConfig& cfg, const FieldGrid& field) {
    if (cfg.emit.csv) sink.write("field.csv", field_csv(field));
    if (cfg.emit.json) {
        json side = field_sidecar(field, cfg.medium_params());
        side["amplitude_unit"] = "length_unit^-1";
        side["length_unit"] = cfg.medium.length_unit;
        side["parameters"] = parameter_echo(cfg);
        sink.write_json("field.json", side);
    }
}

std::vector<double> z_in_wavelengths(const EnvelopeSeries& s) {
    std::vector<double> z(s.values.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = s.z[i] / s.wavelength;
    return z;
}

void write_envelope(OutputSink& sink, const RunConfig& cfg, const EnvelopeArtifacts& env) {
    if (cfg.emit.csv) {
        sink.write("envelope.csv", envelope_csv(env.energy, &env.decomposition));
        sink.write("density_small.csv", density_csv(env.small_density));
        sink.write("density_large.csv", density_csv(env.large_density));
        sink.write("density_envelope.csv", density_csv(env.envelope_density));
    }
    if (cfg.emit.json) {
        const Probe probe = cfg.probe();
        sink.write_json("envelope.json",
                        json{{"windows",
                              {{"short_wavelengths", cfg.windows.short_window},
                               {"long_wavelengths", cfg.windows.long_window},
                               {"short_samples", env.decomposition.short_window},
                               {"long_samples", env.decomposition.long_window}}},
                             {"probe", {probe.x, probe.y}},
                             {"seed", cfg.seed},
                             {"samples", env.energy.values.size()},
                             {"density_small", density_summary(env.small_density)},
                             {"density_large", density_summary(env.large_density)},
                             {"density_envelope", density_summary(env.envelope_density)},
                             {"parameters", parameter_echo(cfg)}});
    }
    if (cfg.emit.svg) {
        const std::vector<double> z = z_in_wavelengths(env.energy);
        sink.write("large_scale.svg", svg_line_plot(SvgSeries{"Large-scale envelope", "z / lambda", "e_r,l", z,
                                                              env.decomposition.large_scale}));
        sink.write("small_scale.svg", svg_line_plot(SvgSeries{"Small-scale envelope", "z / lambda", "e_r,s", z,
                                                              env.decomposition.small_scale}));
        sink.write("envelope_density.svg", svg_histogram(env.envelope_density, "Envelope density p_R", "r"));
    }
}

void write_noise(OutputSink& sink, const RunConfig& cfg, const NoiseSummary& summary) {
    if (cfg.emit.csv) sink.write("noise_pdf.csv", noise_pdf_csv(cfg.noise));
    if (cfg.emit.json) {
        sink.write_json("noise.json", json{{"spec",
                                            {{"sigma_g2", cfg.noise.sigma_g2},
                                             {"mu_g", cfg.noise.mu_g},
                                             {"lambda_p", cfg.noise.lambda_p},
                                             {"hbar_f", cfg.noise.quantum}}},
                                           {"summary", summary.to_json()}});
    }
}

void write_capacity(OutputSink& sink, const RunConfig& cfg, const CapacityReport& report,
                    const EmpiricalDensity* density) {
    if (cfg.emit.json) sink.write_json("capacity.json", report.to_json());
    if (cfg.emit.csv) {
        sink.write("capacity_sweep.csv",
                   capacity_sweep_csv(report.inputs, report.ea_mode, report.noise_level, density));
    }
}

void finish(OutputSink& sink, const RunConfig& cfg) { sink.finish(parameter_echo(cfg), cfg.seed, artifact_names()); }

}  // namespace

json CapacityReport::to_json() const {
    json flags = json::array();
    for (const auto& f : regime_flags) flags.push_back(f);
    return json{{"inputs", inputs_json(inputs)},
                {"ea_mode", ea_mode_name(ea_mode)},
                {"noise_level", noise_level},
                {"units", "bits/s"},
                {"C_shannon", shannon},
                {"C_F", fock},
                {"C_H", holevo},
                {"C_E", ea ? json(*ea) : json(nullptr)},
                {"C_cqc", fading ? json(*fading) : json(nullptr)},
                {"regime_flags", flags}};
}

CapacityReport capacity_report(const CapacityInputs& in, EaMode mode, double noise_level,
                               const EmpiricalDensity* density) {
    CapacityReport r;
    r.inputs = in;
    r.ea_mode = mode;
    r.noise_level = noise_level;
    r.shannon = shannon_capacity(in);
    r.fock = fock_capacity(in);
    r.holevo = holevo_capacity(in);
    try {
        r.ea = ea_capacity(in, mode);
    } catch (const RegimeError& e) {
        r.regime_flags.emplace_back(std::string("C_E: ") + e.what());
    }
    if (density) r.fading = fading_capacity(in, *density, noise_level);
    return r;
}

std::string capacity_sweep_csv(const CapacityInputs& in, EaMode mode, double noise_level,
                               const EmpiricalDensity* density, std::size_t points) {
    std::string out = "param,value,C_shannon,C_F,C_H,C_E,C_cqc\n";
    const double base = in.power > 0 ? in.power : 1.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points > 1 ? static_cast<double>(i) / static_cast<double>(points - 1) : 0.5;
        CapacityInputs p = in;
        p.power = base * std::pow(10.0, -2.0 + 4.0 * t);
        const CapacityReport r = capacity_report(p, mode, noise_level, density);
        out += "power,";
        out += format_double(p.power);
        for (double v : {r.shannon, r.fock, r.holevo}) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += r.ea ? format_double(*r.ea) : "nan";
        out += ',';
        out += r.fading ? format_double(*r.fading) : "nan";
        out += '\n';
    }
    return out;
}

json NoiseSummary::to_json() const {
    return json{{"exact", {{"mean", exact.mean}, {"variance", exact.variance}}},
                {"monte_carlo", {{"mean", sample_mean}, {"variance", sample_variance}, {"draws", draws}}},
                {"seed", seed}};
}

NoiseSummary summarize_noise(const HybridNoiseSpec& spec, std::size_t draws, std::uint64_t seed) {
    NoiseSummary s;
    s.exact = hybrid_moments(spec);
    s.draws = draws;
    s.seed = seed;
    const std::vector<double> x = sample_hybrid_noise(spec, draws, seed);
    long double sum = 0;
    for (double v : x) sum += v;
    const long double mean = sum / static_cast<long double>(x.size());
    long double sq = 0;
    for (double v : x) sq += (v - mean) * (v - mean);
    s.sample_mean = static_cast<double>(mean);
    s.sample_variance = x.size() > 1 ? static_cast<double>(sq / static_cast<long double>(x.size() - 1)) : 0.0;
    return s;
}

std::string noise_pdf_csv(const HybridNoiseSpec& spec) {
    const NoiseMoments m = hybrid_moments(spec);
    const double sd = std::sqrt(m.variance);
    constexpr int points = 512;
    std::string out = "x,pdf\n";
    for (int i = 0; i < points; ++i) {
        const double x = m.mean - 6.0 * sd + 12.0 * sd * i / (points - 1);
        out += format_double(x);
        out += ',';
        out += format_double(hybrid_density(spec, x));
        out += '\n';
    }
    return out;
}

json ck_params_json(const CKParams& p, const CKInputs& in) {
    return json{{"inputs",
                 {{"omega", in.omega},
                  {"omega_c", in.omega_c},
                  {"quantization", in.quantization},
                  {"beta", in.beta()}}},
                {"branch", p.branch == Branch::plus ? "plus" : "minus"},
                {"alpha", p.alpha},
                {"gamma", p.gamma},
                {"epsilon", p.epsilon},
                {"lambda", p.lambda},
                {"sigma", p.sigma},
                {"kappa", p.kappa},
                {"r_w", p.r_w},
                {"s_w", p.s_w},
                {"G", p.g},
                {"S_e", p.s_e}};
}

json parameter_echo(const RunConfig& cfg) {
    json j = config_to_json(cfg);
    j.erase("output");
    j.erase("workers");
    return j;
}

const std::vector<std::string>& artifact_names() {
    static const std::vector<std::string> names{
        "field.csv",          "field.json",         "envelope.csv",   "envelope.json",   "density_small.csv",
        "density_large.csv",  "density_envelope.csv", "noise_pdf.csv", "noise.json",      "capacity.json",
        "capacity_sweep.csv", "ck_params.json",     "large_scale.svg", "small_scale.svg", "envelope_density.svg"};
    return names;
}

FieldGrid run_field(const RunConfig& cfg) {
    return stage("propagate_cluster", [&] {
        PropagationOptions opts;
        opts.zero_point = cfg.cluster.zero_point;
        opts.workers = cfg.workers;
        FieldGrid f = propagate_cluster(cfg.cluster_config(), cfg.x_axis(), cfg.y_axis(), cfg.z_axis(),
                                        cfg.medium_params(), opts);
        // Amplitudes in length_unit^-1, the unit the medium coefficients are given in.
        for (Complex& v : f.data()) v *= cfg.medium.length_unit;
        f.check_finite();
        return f;
    });
}

EnvelopeArtifacts run_envelope(const RunConfig& cfg, const FieldGrid& field) {
    EnvelopeArtifacts a;
    a.energy = stage("received_energy", [&] { return received_energy(field, cfg.probe(), cfg.medium.wavelength); });
    a.decomposition = stage("decompose_envelope", [&] {
        return decompose_envelope(a.energy,
                                  DecompositionOptions{cfg.windows.short_window, cfg.windows.long_window, cfg.windows.norm});
    });
    stage("estimate_density", [&] {
        a.small_density = estimate_density(a.decomposition.small_scale, BinSpec{cfg.density.bins, std::nullopt});
        a.large_density = estimate_density(a.decomposition.large_scale, BinSpec{cfg.density.bins, std::nullopt});
        return 0;
    });
    a.envelope_density = stage("envelope_density", [&] {
        EmpiricalDensity d = envelope_density(a.small_density, a.large_density, cfg.density.product);
        d.require_normalized();
        return d;
    });
    return a;
}

RunArtifacts run_pipeline(const RunConfig& cfg) {
    FieldGrid field = run_field(cfg);
    EnvelopeArtifacts env = run_envelope(cfg, field);
    const double noise_level =
        stage("cross_psd", [&] { return cross_psd(cfg.noise, 0.0, cfg.capacity.inputs.bandwidth); });
    NoiseSummary noise =
        stage("noise_monte_carlo", [&] { return summarize_noise(cfg.noise, cfg.monte_carlo_draws, cfg.seed); });
    CapacityReport cap = stage("capacity", [&] {
        return capacity_report(cfg.capacity.inputs, cfg.capacity.ea_mode, noise_level, &env.envelope_density);
    });
    CKParams ck = stage("ck_solver", [&] {
        return cfg.ck.auto_branch ? derive_ck_params_auto(cfg.ck.inputs) : derive_ck_params(cfg.ck.inputs);
    });
    return RunArtifacts{cfg, std::move(field), std::move(env), noise, std::move(cap), ck};
}

void emit_field(const RunConfig& cfg, const FieldGrid& field) {
    stage("emit_outputs", [&] {
        OutputSink sink(cfg.output);
        write_field(sink, cfg, field);
        finish(sink, cfg);
        return 0;
    });
}

void emit_envelope(const RunConfig& cfg, const EnvelopeArtifacts& env) {
    stage("emit_outputs", [&] {
        OutputSink sink(cfg.output);
        write_envelope(sink, cfg, env);
        finish(sink, cfg);
        return 0;
    });
}

void emit_noise(const RunConfig& cfg, const NoiseSummary& summary) {
    stage("emit_outputs", [&] {
        OutputSink sink(cfg.output);
        write_noise(sink, cfg, summary);
        finish(sink, cfg);
        return 0;
    });
}

void emit_capacity(const RunConfig& cfg, const CapacityReport& report, const EmpiricalDensity* density) {
    stage("emit_outputs", [&] {
        OutputSink sink(cfg.output);
        write_capacity(sink, cfg, report, density);
        finish(sink, cfg);
        return 0;
    });
}

void emit_outputs(const RunArtifacts& a) {
    stage("emit_outputs", [&] {
        const RunConfig& cfg = a.config;
        OutputSink sink(cfg.output);
        write_field(sink, cfg, a.field);
        write_envelope(sink, cfg, a.envelope);
        write_noise(sink, cfg, a.noise);
        write_capacity(sink, cfg, a.capacity, &a.envelope.envelope_density);
        if (cfg.emit.json) sink.write_json("ck_params.json", ck_params_json(a.ck, cfg.ck.inputs));
        finish(sink, cfg);
        return 0;
    });
}

}  // namespace qho
