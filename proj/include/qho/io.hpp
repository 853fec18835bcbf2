#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qho/envelope_stats.hpp"
#include "qho/field_model.hpp"

namespace qho {

/// Round-trip decimal form of a double (%.17g).
std::string format_double(double v);

/// Lowercase hex SHA-256 of `content`.
std::string sha256_hex(const std::string& content);

/// field CSV: `x,y,z,re,im`, z slowest, x fastest.
std::string field_csv(const FieldGrid& field);
nlohmann::json field_sidecar(const FieldGrid& field, const MediumParams& params);

/// envelope CSV: `z,e_r` or `z,e_r,e_rs,e_rl` when the decomposition is given.
std::string envelope_csv(const EnvelopeSeries& series, const EnvelopeDecomposition* decomposition = nullptr);

/// density CSV: `bin_left,bin_right,probability`.
std::string density_csv(const EmpiricalDensity& density);

/// Parses a density CSV; throws IoError on unreadable files and
/// ConfigSyntaxError on malformed rows.
EmpiricalDensity read_density_csv(const std::filesystem::path& path);

/// Writes files into one directory and remembers their hashes for the manifest.
class OutputSink {
public:
    /// Creates the directory; throws IoError when that fails.
    explicit OutputSink(std::filesystem::path dir);

    void write(const std::string& name, const std::string& content);
    void write_json(const std::string& name, const nlohmann::json& doc);

    /// Deletes files from an earlier run whose names are in `known` but were
    /// not written this time, then writes manifest.json.
    void finish(const nlohmann::json& parameters, std::uint64_t seed, const std::vector<std::string>& known);

    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;  // name, sha256
};

struct SvgSeries {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static line plot.
std::string svg_line_plot(const SvgSeries& series);

/// Histogram with one <rect> per bin, bar height = probability / width.
std::string svg_histogram(const EmpiricalDensity& density, const std::string& title, const std::string& x_label);

}  // namespace qho
