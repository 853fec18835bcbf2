#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qho/capacity.hpp"
#include "qho/ck_solver.hpp"
#include "qho/envelope_stats.hpp"
#include "qho/field_model.hpp"
#include "qho/noise_model.hpp"

namespace qho {

/// Photon energy h c / lambda at the default 1300 nm.
double photon_energy(double wavelength);

struct MediumBlock {
    double wavelength = 1300e-9;
    double n0 = 1.45;
    double kx = 1.2;  // in length_unit^-4
    double ky = 1.5;
    double g = 0.25;
    double length_unit = 1e-6;

    [[nodiscard]] MediumParams params() const;
    [[nodiscard]] double scale_curvature(double k) const;  // to SI
};

struct PhotonSpec {
    int cluster = 1;
    int index = 1;
    int ex = 2;
    int ey = 2;
    std::optional<double> kx;  // length_unit^-4; defaults to the medium
    std::optional<double> ky;
};

struct ClusterBlock {
    int n1 = 4;
    int n2 = 4;
    int level = 2;
    LevelPattern pattern = LevelPattern::shell;
    std::vector<PhotonSpec> photons;  // optional explicit list, replaces the pattern
    double mu = 0;
    double sigma1 = 0;
    double sigma2 = 0;
    ZeroPoint zero_point = ZeroPoint::consistent;
};

struct GridBlock {
    std::size_t nx = 5;
    std::size_t ny = 5;
    std::optional<double> half_width;  // m; default: ground-mode radius w0
    std::size_t nz = 8192;
    double z_start = 0.0;
    double hz_wavelengths = 0.125;  // h_z = lambda / 8
    std::optional<Probe> probe;     // m; default (w0/2, w0/2)
    std::optional<double> rayleigh_range;  // m; default k0 / sqrt(wx wy)
};

struct WindowBlock {
    double short_window = 4.0;
    double long_window = 150.0;
    SmallScaleNorm norm = SmallScaleNorm::sqrt_mean;
};

struct DensityBlock {
    std::size_t bins = 0;
    DensityProduct product = DensityProduct::pointwise;
};

struct CapacityBlock {
    CapacityInputs inputs;
    EaMode ea_mode = EaMode::as_printed;
};

struct CKBlock {
    CKInputs inputs;
    bool auto_branch = true;
};

struct EmitFlags {
    bool csv = true;
    bool json = true;
    bool svg = true;
};

struct RunConfig {
    std::string preset = "none";
    MediumBlock medium;
    ClusterBlock cluster;
    GridBlock grid;
    WindowBlock windows;
    DensityBlock density;
    HybridNoiseSpec noise;
    CapacityBlock capacity;
    CKBlock ck;
    std::uint64_t seed = 0;
    std::filesystem::path output = "qho_out";
    EmitFlags emit;
    unsigned workers = 1;
    std::size_t monte_carlo_draws = 100000;

    /// Checks every block; throws ConfigError (or the module's InvariantError).
    void validate() const;

    [[nodiscard]] MediumParams medium_params() const { return medium.params(); }
    [[nodiscard]] ClusterConfig cluster_config() const;
    /// Transverse axes, z axis, probe and Rayleigh range after defaults.
    [[nodiscard]] Axis x_axis() const;
    [[nodiscard]] Axis y_axis() const;
    [[nodiscard]] Axis z_axis() const;
    [[nodiscard]] Probe probe() const;
    [[nodiscard]] double waist() const;
    [[nodiscard]] double rayleigh_range() const;
};

/// Built-in parameter sets ("fig1": kx 1.2, ky 1.5, g 0.25; "fig2": 3.5, 5, 0.5).
RunConfig preset_config(const std::string& name);

/// Overlays a JSON document on `base`. Unknown keys and wrong types throw
/// ConfigSyntaxError naming the key; invariant violations throw ConfigError.
RunConfig apply_config_json(RunConfig base, const nlohmann::json& doc);

/// Reads and validates a config file. Missing file -> IoError, bad JSON ->
/// ConfigSyntaxError, invariant violation -> InvariantError.
RunConfig parse_config(const std::filesystem::path& path, const std::string& preset = "");

/// Fully resolved config as JSON (used for echo in the manifest).
nlohmann::json config_to_json(const RunConfig& cfg);

EmitFlags parse_emit_flags(const std::string& list);

}  // namespace qho
