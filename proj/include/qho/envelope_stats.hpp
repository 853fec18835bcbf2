#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qho/field_model.hpp"

namespace qho {

/// Received energy sampled along z at a fixed transverse probe.
struct EnvelopeSeries {
    Axis z;
    std::vector<double> values;
    double wavelength = 0;

    void validate() const;
};

/// Normalized histogram. `edges.size() == probabilities.size() + 1`.
struct EmpiricalDensity {
    std::vector<double> edges;
    std::vector<double> probabilities;
    bool normalized = false;

    [[nodiscard]] std::size_t bins() const { return probabilities.size(); }
    [[nodiscard]] double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
    [[nodiscard]] double midpoint(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
    [[nodiscard]] double mean() const;
    [[nodiscard]] double second_moment() const;

    /// Throws NormalizationError unless probabilities sum to 1 within tol.
    void require_normalized(double tol = 1e-9) const;
    void validate() const;
};

struct Probe {
    double x = 0;
    double y = 0;
};

/// e_r(z) = |E(x*, y*, z)|^2 / 2 at the grid node nearest to the probe.
/// Throws ProbeError when the probe lies more than one cell outside the grid.
EnvelopeSeries received_energy(const FieldGrid& field, Probe probe, double wavelength);

/// e_r(z) = (|E_x|^2 + |E_z|^2) / 2 for the two-component paraxial field.
EnvelopeSeries received_energy(const VectorField& field, Probe probe, double wavelength);

/// Window length in samples, round-half-to-even of window_wavelengths * lambda / h_z.
std::size_t window_samples(double window_wavelengths, double wavelength, double hz);

/// Centered moving average of width `window` samples. Near the ends the window
/// shrinks symmetrically so it stays centered; constants pass through exactly.
std::vector<double> moving_average(const std::vector<double>& series, std::size_t window);

/// Window given in wavelengths, converted through the series' z spacing.
EnvelopeSeries moving_average(const EnvelopeSeries& series, double window_wavelengths);

enum class SmallScaleNorm {
    sqrt_mean,  // e_r / sqrt(psi)
    mean_one,   // e_r / psi
};

struct EnvelopeDecomposition {
    std::vector<double> short_average;  // psi
    std::vector<double> long_average;   // psi'
    std::vector<double> small_scale;    // e_{r,s}
    std::vector<double> large_scale;    // e_{r,l} = psi / psi'
    std::size_t short_window = 0;
    std::size_t long_window = 0;
};

struct DecompositionOptions {
    double short_window = 4.0;  // wavelengths
    double long_window = 150.0;
    SmallScaleNorm norm = SmallScaleNorm::sqrt_mean;
};

/// Throws DegenerateEnvelopeError when any psi or psi' sample is <= 1e-30.
EnvelopeDecomposition decompose_envelope(const EnvelopeSeries& series, const DecompositionOptions& options = {});

struct BinSpec {
    std::size_t bins = 0;  // 0: Freedman-Diaconis
    std::optional<std::pair<double, double>> range;
};

/// Histogram estimate; zero interquartile range falls back to 32 uniform bins
/// over [min, max + eps]. Needs at least 100 finite samples.
EmpiricalDensity estimate_density(const std::vector<double>& samples, const BinSpec& spec = {});

enum class DensityProduct {
    pointwise,         // multiply the two densities on a common grid, renormalize
    product_variable,  // density of X*Y for independent X, Y
};

/// Density of the received envelope from the small- and large-scale densities.
/// Throws EmptyProductError when the pointwise product vanishes everywhere.
EmpiricalDensity envelope_density(const EmpiricalDensity& small, const EmpiricalDensity& large,
                                  DensityProduct mode = DensityProduct::pointwise);

}  // namespace qho
