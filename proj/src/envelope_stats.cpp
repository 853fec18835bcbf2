#include "qho/envelope_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qho/errors.hpp"

namespace qho {

namespace {

constexpr double kEnvelopeFloor = 1e-30;

std::size_t nearest_node(const Axis& axis, double v, const char* name) {
    const double lo = axis.start - axis.step;
    const double hi = axis.back() + axis.step;
    if (!std::isfinite(v) || v < lo || v > hi) {
        throw ProbeError(std::string("probe ") + name + " = " + std::to_string(v) + " lies outside the grid");
    }
    const double idx = std::round((v - axis.start) / axis.step);
    return static_cast<std::size_t>(std::clamp(idx, 0.0, double(axis.count - 1)));
}

/// Density value of `d` averaged over [a, b].
double average_density(const EmpiricalDensity& d, double a, double b) {
    double mass = 0.0;
    for (std::size_t i = 0; i < d.bins(); ++i) {
        const double lo = std::max(a, d.edges[i]);
        const double hi = std::min(b, d.edges[i + 1]);
        if (hi > lo) mass += d.probabilities[i] * (hi - lo) / d.width(i);
    }
    return mass / (b - a);
}

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * double(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - double(lo)) * (sorted[hi] - sorted[lo]);
}

EmpiricalDensity uniform_bins(double lo, double hi, std::size_t n) {
    EmpiricalDensity d;
    d.edges.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) d.edges[i] = lo + (hi - lo) * double(i) / double(n);
    d.edges[n] = hi;
    d.probabilities.assign(n, 0.0);
    return d;
}

void normalize(EmpiricalDensity& d) {
    const double total = std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
    for (double& p : d.probabilities) p /= total;
    d.normalized = true;
}

}  // namespace

void EnvelopeSeries::validate() const {
    if (!(z.step > 0)) throw GridError("envelope series needs a positive z spacing");
    if (values.size() != z.count) throw LengthError("envelope series length does not match its z axis");
    for (double v : values) {
        if (!(v >= 0) || !std::isfinite(v)) throw DomainError("envelope energies must be finite and >= 0");
    }
}

double EmpiricalDensity::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < bins(); ++i) m += probabilities[i] * midpoint(i);
    return m;
}

double EmpiricalDensity::second_moment() const {
    double m = 0.0;
    for (std::size_t i = 0; i < bins(); ++i) m += probabilities[i] * midpoint(i) * midpoint(i);
    return m;
}

void EmpiricalDensity::validate() const {
    if (probabilities.empty() || edges.size() != probabilities.size() + 1) {
        throw DomainError("density needs one more edge than bins");
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!std::isfinite(edges[i]) || !(edges[i + 1] > edges[i])) {
            throw DomainError("density edges must be finite and strictly increasing");
        }
    }
    for (double p : probabilities) {
        if (!(p >= 0) || !std::isfinite(p)) throw DomainError("density probabilities must be finite and >= 0");
    }
}

void EmpiricalDensity::require_normalized(double tol) const {
    validate();
    const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (std::abs(total - 1.0) > tol) {
        throw NormalizationError("density probabilities sum to " + std::to_string(total) + ", expected 1");
    }
}

EnvelopeSeries received_energy(const FieldGrid& field, Probe probe, double wavelength) {
    const std::size_t ix = nearest_node(field.x(), probe.x, "x");
    const std::size_t iy = nearest_node(field.y(), probe.y, "y");
    EnvelopeSeries s{field.z(), std::vector<double>(field.z().count), wavelength};
    for (std::size_t iz = 0; iz < field.z().count; ++iz) s.values[iz] = 0.5 * std::norm(field.at(ix, iy, iz));
    return s;
}

EnvelopeSeries received_energy(const VectorField& field, Probe probe, double wavelength) {
    const std::size_t ix = nearest_node(field.ex.x(), probe.x, "x");
    const std::size_t iy = nearest_node(field.ex.y(), probe.y, "y");
    EnvelopeSeries s{field.ex.z(), std::vector<double>(field.ex.z().count), wavelength};
    for (std::size_t iz = 0; iz < s.values.size(); ++iz) {
        s.values[iz] = 0.5 * (std::norm(field.ex.at(ix, iy, iz)) + std::norm(field.ez.at(ix, iy, iz)));
    }
    return s;
}

std::size_t window_samples(double window_wavelengths, double wavelength, double hz) {
    if (!(window_wavelengths > 0) || !(wavelength > 0) || !(hz > 0)) {
        throw LengthError("window length, wavelength and spacing must be positive");
    }
    // nearbyint follows the default round-to-nearest-even mode.
    const double w = std::nearbyint(window_wavelengths * wavelength / hz);
    if (w < 1) throw LengthError("window shorter than one sample");
    return static_cast<std::size_t>(w);
}

std::vector<double> moving_average(const std::vector<double>& series, std::size_t window) {
    const std::size_t n = series.size();
    if (window < 1) throw LengthError("moving-average window must be >= 1 sample");
    if (n < window) {
        throw LengthError("series of " + std::to_string(n) + " samples is shorter than the " +
                          std::to_string(window) + "-sample window");
    }
    // Window covers [i - left, i + right]; even windows lean left by one.
    const std::size_t left = window / 2;
    const std::size_t right = window - 1 - left;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t room = std::min(i, n - 1 - i);
        const std::size_t l = std::min(left, room);
        const std::size_t r = std::min(right, room);
        // Extended accumulation keeps w * c exact, so constants come back unchanged.
        long double acc = 0.0L;
        for (std::size_t k = i - l; k <= i + r; ++k) acc += series[k];
        out[i] = static_cast<double>(acc / static_cast<long double>(l + r + 1));
    }
    return out;
}

EnvelopeSeries moving_average(const EnvelopeSeries& series, double window_wavelengths) {
    EnvelopeSeries out = series;
    out.values = moving_average(series.values, window_samples(window_wavelengths, series.wavelength, series.z.step));
    return out;
}

EnvelopeDecomposition decompose_envelope(const EnvelopeSeries& series, const DecompositionOptions& options) {
    series.validate();
    if (!(options.short_window < options.long_window)) throw LengthError("short window must be shorter than long window");
    EnvelopeDecomposition d;
    d.short_window = window_samples(options.short_window, series.wavelength, series.z.step);
    d.long_window = window_samples(options.long_window, series.wavelength, series.z.step);
    d.short_average = moving_average(series.values, d.short_window);
    d.long_average = moving_average(d.short_average, d.long_window);
    const std::size_t n = series.values.size();
    d.small_scale.resize(n);
    d.large_scale.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double psi = d.short_average[i];
        const double psi_long = d.long_average[i];
        if (!(psi > kEnvelopeFloor) || !(psi_long > kEnvelopeFloor)) {
            throw DegenerateEnvelopeError("envelope average vanishes at z index " + std::to_string(i) +
                                          " (dark probe point?)");
        }
        d.small_scale[i] =
            options.norm == SmallScaleNorm::sqrt_mean ? series.values[i] / std::sqrt(psi) : series.values[i] / psi;
        d.large_scale[i] = psi / psi_long;
    }
    return d;
}

EmpiricalDensity estimate_density(const std::vector<double>& samples, const BinSpec& spec) {
    if (samples.size() < 100) throw LengthError("density estimation needs at least 100 samples");
    for (double s : samples) {
        if (!std::isfinite(s)) throw DomainError("density samples must be finite");
    }
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    double lo = sorted.front();
    double hi = sorted.back();
    if (spec.range) {
        lo = spec.range->first;
        hi = spec.range->second;
        if (!(hi > lo)) throw DomainError("density range must be increasing");
    }
    std::size_t bins = spec.bins;
    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    if (!spec.range && (iqr <= 0.0 || hi <= lo)) {
        hi = hi + std::max(std::abs(hi), 1.0) * 1e-9;
        if (bins == 0) bins = 32;
    } else if (bins == 0) {
        const double width = 2.0 * iqr / std::cbrt(double(sorted.size()));
        bins = static_cast<std::size_t>(std::clamp(std::ceil((hi - lo) / width), 1.0, 100000.0));
    }
    EmpiricalDensity d = uniform_bins(lo, hi, bins);
    const double scale = double(bins) / (hi - lo);
    for (double s : sorted) {
        if (s < lo || s > hi) continue;
        auto i = static_cast<std::size_t>((s - lo) * scale);
        i = std::min(i, bins - 1);
        // Guard the edge rounding in (s - lo) * scale.
        while (i > 0 && s < d.edges[i]) --i;
        while (i + 1 < bins && s >= d.edges[i + 1]) ++i;
        d.probabilities[i] += 1.0;
    }
    const double total = std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
    if (total == 0.0) throw DomainError("no samples fall inside the density range");
    normalize(d);
    return d;
}

EmpiricalDensity envelope_density(const EmpiricalDensity& small, const EmpiricalDensity& large, DensityProduct mode) {
    small.require_normalized();
    large.require_normalized();
    const std::size_t bins = std::max(small.bins(), large.bins());

    if (mode == DensityProduct::product_variable) {
        // Mass of each bin pair lands at the product of the midpoints.
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < small.bins(); ++i) {
            for (std::size_t j = 0; j < large.bins(); ++j) {
                const double v = small.midpoint(i) * large.midpoint(j);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        if (!(hi > lo)) hi = lo + std::max(std::abs(lo), 1.0) * 1e-9;
        EmpiricalDensity out = uniform_bins(lo, hi, bins);
        const double scale = double(bins) / (hi - lo);
        for (std::size_t i = 0; i < small.bins(); ++i) {
            for (std::size_t j = 0; j < large.bins(); ++j) {
                const double mass = small.probabilities[i] * large.probabilities[j];
                if (mass == 0.0) continue;
                const double v = small.midpoint(i) * large.midpoint(j);
                const auto k = std::min(static_cast<std::size_t>((v - lo) * scale), bins - 1);
                out.probabilities[k] += mass;
            }
        }
        normalize(out);
        return out;
    }

    // The pointwise product vanishes outside the overlap of the two supports.
    const double lo = std::max(small.edges.front(), large.edges.front());
    const double hi = std::min(small.edges.back(), large.edges.back());
    if (!(hi > lo)) {
        throw EmptyProductError("small- and large-scale densities have disjoint supports; their product is empty");
    }
    EmpiricalDensity out = uniform_bins(lo, hi, bins);
    double total = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
        const double a = out.edges[k];
        const double b = out.edges[k + 1];
        const double p = average_density(small, a, b) * average_density(large, a, b) * (b - a);
        out.probabilities[k] = p;
        total += p;
    }
    if (!(total > 0.0)) {
        throw EmptyProductError("small- and large-scale densities have disjoint supports; their product is empty");
    }
    normalize(out);
    return out;
}

}  // namespace qho
