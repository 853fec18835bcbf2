#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qho/config.hpp"
#include "qho/errors.hpp"
#include "qho/pipeline.hpp"
#include "qho/verify.hpp"

namespace {

constexpr int kExitSyntax = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitIo = 4;
constexpr int kExitNumeric = 5;

struct CommonArgs {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string emit;
    std::optional<unsigned> workers;
    std::string density;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "JSON config file");
    cmd->add_option("--preset", args.preset, "Built-in parameter set")->check(CLI::IsMember({"fig1", "fig2"}));
    cmd->add_option("--out", args.out, "Output directory");
    cmd->add_option("--seed", args.seed, "Monte-Carlo seed");
    cmd->add_option("--emit", args.emit, "Comma list of csv,json,svg");
    cmd->add_option("--workers", args.workers, "Threads for field evaluation");
}

qho::RunConfig resolve(const CommonArgs& args) {
    qho::RunConfig cfg = args.config.empty() ? qho::preset_config(args.preset)
                                             : qho::parse_config(args.config, args.preset);
    if (!args.out.empty()) cfg.output = args.out;
    if (args.seed) cfg.seed = *args.seed;
    if (!args.emit.empty()) cfg.emit = qho::parse_emit_flags(args.emit);
    if (args.workers) cfg.workers = *args.workers;
    cfg.validate();
    return cfg;
}

int exit_code(qho::ErrorKind kind) {
    switch (kind) {
        case qho::ErrorKind::syntax: return kExitSyntax;
        case qho::ErrorKind::invariant: return kExitInvariant;
        case qho::ErrorKind::io: return kExitIo;
        case qho::ErrorKind::numeric: return kExitNumeric;
    }
    return kExitNumeric;
}

void report_files(const qho::RunConfig& cfg) { std::cout << "outputs written to " << cfg.output.string() << "\n"; }

int run_selftest() {
    bool ok = true;
    for (const qho::CheckResult& r : qho::run_selftest()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        ok = ok && r.passed;
    }
    return ok ? 0 : kExitNumeric;
}

int run_command(const std::string& name, const CommonArgs& args) {
    if (name == "selftest") return run_selftest();
    qho::RunConfig cfg;
    try {
        cfg = resolve(args);
    } catch (const std::exception& e) {
        std::cerr << "qho: config error: " << e.what() << "\n";
        const qho::ErrorKind kind = qho::classify(e);
        return exit_code(kind == qho::ErrorKind::numeric ? qho::ErrorKind::invariant : kind);
    }
    if (name == "field") {
        qho::emit_field(cfg, qho::run_field(cfg));
    } else if (name == "envelope") {
        const qho::FieldGrid field = qho::run_field(cfg);
        qho::emit_envelope(cfg, qho::run_envelope(cfg, field));
    } else if (name == "noise") {
        qho::emit_noise(cfg, qho::summarize_noise(cfg.noise, cfg.monte_carlo_draws, cfg.seed));
    } else if (name == "capacity") {
        std::optional<qho::EmpiricalDensity> density;
        if (!args.density.empty()) density = qho::read_density_csv(args.density);
        const double level = qho::cross_psd(cfg.noise, 0.0, cfg.capacity.inputs.bandwidth);
        const qho::CapacityReport report = qho::capacity_report(cfg.capacity.inputs, cfg.capacity.ea_mode, level,
                                                                density ? &*density : nullptr);
        qho::emit_capacity(cfg, report, density ? &*density : nullptr);
        std::cout << report.to_json().dump(2) << "\n";
    } else {
        const qho::RunArtifacts a = qho::run_pipeline(cfg);
        qho::emit_outputs(a);
        std::cout << "C_cqc = " << qho::format_double(a.capacity.fading.value_or(0.0)) << " bits/s\n";
    }
    report_files(cfg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic-index photon cluster channel: field, envelope, noise and capacity"};
    app.require_subcommand(1);
    CommonArgs args;
    const char* names[] = {"field", "envelope", "noise", "capacity", "pipeline", "selftest"};
    const char* help[] = {"Evaluate the cluster field on the grid",
                          "Field, received energy, decomposition and densities",
                          "Hybrid noise density and Monte-Carlo moments",
                          "Capacity bounds (never evaluates the field)",
                          "Full chain from field to capacity",
                          "Residual, orthonormality and reduction checks"};
    for (int i = 0; i < 6; ++i) {
        CLI::App* cmd = app.add_subcommand(names[i], help[i]);
        if (std::string(names[i]) != "selftest") add_common(cmd, args);
        if (std::string(names[i]) == "capacity") {
            cmd->add_option("--density", args.density, "Envelope density CSV (bin_left,bin_right,probability)");
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitSyntax;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return run_command(name, args);
    } catch (const qho::StageError& e) {
        std::cerr << "qho: stage '" << e.stage() << "' failed: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        const qho::ErrorKind kind = qho::classify(e);
        std::cerr << "qho: stage '" << name << "' failed: " << e.what() << "\n";
        return exit_code(kind);
    }
}
