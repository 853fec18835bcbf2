#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qho/config.hpp"
#include "qho/io.hpp"

namespace qho {

enum class ErrorKind { syntax, invariant, io, numeric };

/// Module error re-raised with the pipeline stage that produced it.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, ErrorKind kind, const std::string& message);

    [[nodiscard]] const std::string& stage() const { return stage_; }
    [[nodiscard]] ErrorKind kind() const { return kind_; }

private:
    std::string stage_;
    ErrorKind kind_;
};

/// Maps a qho error type to its category; unknown exceptions count as numeric.
ErrorKind classify(const std::exception& e);

struct CapacityReport {
    CapacityInputs inputs;
    EaMode ea_mode = EaMode::as_printed;
    double noise_level = 0;  // N_{beta rho}, W/Hz
    double shannon = 0;
    double fock = 0;
    double holevo = 0;
    std::optional<double> ea;
    std::optional<double> fading;
    std::vector<std::string> regime_flags;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Every capacity for one set of inputs; regime errors of the
/// entanglement-assisted bound become flags instead of failures.
CapacityReport capacity_report(const CapacityInputs& in, EaMode mode, double noise_level,
                               const EmpiricalDensity* density);

/// Sweep of `param` ("power") over log-spaced values, CSV
/// `param,value,C_shannon,C_F,C_H,C_E,C_cqc`.
std::string capacity_sweep_csv(const CapacityInputs& in, EaMode mode, double noise_level,
                               const EmpiricalDensity* density, std::size_t points = 100);

struct NoiseSummary {
    NoiseMoments exact;
    double sample_mean = 0;
    double sample_variance = 0;
    std::size_t draws = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] nlohmann::json to_json() const;
};

NoiseSummary summarize_noise(const HybridNoiseSpec& spec, std::size_t draws, std::uint64_t seed);

/// Density of the hybrid noise on 512 points over mean +- 6 standard deviations, CSV `x,pdf`.
std::string noise_pdf_csv(const HybridNoiseSpec& spec);

nlohmann::json ck_params_json(const CKParams& p, const CKInputs& in);

struct EnvelopeArtifacts {
    EnvelopeSeries energy;
    EnvelopeDecomposition decomposition;
    EmpiricalDensity small_density;
    EmpiricalDensity large_density;
    EmpiricalDensity envelope_density;
};

struct RunArtifacts {
    RunConfig config;
    FieldGrid field;
    EnvelopeArtifacts envelope;
    NoiseSummary noise;
    CapacityReport capacity;
    CKParams ck;
};

FieldGrid run_field(const RunConfig& cfg);
EnvelopeArtifacts run_envelope(const RunConfig& cfg, const FieldGrid& field);
RunArtifacts run_pipeline(const RunConfig& cfg);

/// Output writers per subcommand; each finishes with manifest.json.
void emit_field(const RunConfig& cfg, const FieldGrid& field);
void emit_envelope(const RunConfig& cfg, const EnvelopeArtifacts& env);
void emit_noise(const RunConfig& cfg, const NoiseSummary& summary);
void emit_capacity(const RunConfig& cfg, const CapacityReport& report, const EmpiricalDensity* density);
void emit_outputs(const RunArtifacts& artifacts);

/// Names of every file the writers can produce (used to clear stale ones).
const std::vector<std::string>& artifact_names();

/// Resolved parameters echoed into the manifest and the sidecars.
nlohmann::json parameter_echo(const RunConfig& cfg);

}  // namespace qho
