#include "qho/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qho/errors.hpp"

namespace qho {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sha256_hex(const std::string& content) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(content.data(), content.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

namespace {

json axis_json(const Axis& a) { return json{{"start", a.start}, {"step", a.step}, {"count", a.count}}; }

}  // namespace

std::string field_csv(const FieldGrid& field) {
    std::string out = "x,y,z,re,im\n";
    out.reserve(out.size() + field.data().size() * 100);
    for (std::size_t iz = 0; iz < field.z().count; ++iz) {
        const std::string z = format_double(field.z()[iz]);
        for (std::size_t iy = 0; iy < field.y().count; ++iy) {
            const std::string y = format_double(field.y()[iy]);
            for (std::size_t ix = 0; ix < field.x().count; ++ix) {
                const Complex v = field.at(ix, iy, iz);
                out += format_double(field.x()[ix]);
                out += ',';
                out += y;
                out += ',';
                out += z;
                out += ',';
                out += format_double(v.real());
                out += ',';
                out += format_double(v.imag());
                out += '\n';
            }
        }
    }
    return out;
}

json field_sidecar(const FieldGrid& field, const MediumParams& params) {
    return json{{"axes", {{"x", axis_json(field.x())}, {"y", axis_json(field.y())}, {"z", axis_json(field.z())}}},
                {"medium",
                 {{"wavelength", params.wavelength()},
                  {"n0", params.n0()},
                  {"k0", params.k0()},
                  {"kx", params.kx()},
                  {"ky", params.ky()},
                  {"g", params.g()},
                  {"units", "SI (kx, ky, g in m^-4)"}}}};
}

std::string envelope_csv(const EnvelopeSeries& series, const EnvelopeDecomposition* decomposition) {
    std::string out = decomposition ? "z,e_r,e_rs,e_rl\n" : "z,e_r\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out += format_double(series.z[i]);
        out += ',';
        out += format_double(series.values[i]);
        if (decomposition) {
            out += ',';
            out += format_double(decomposition->small_scale[i]);
            out += ',';
            out += format_double(decomposition->large_scale[i]);
        }
        out += '\n';
    }
    return out;
}

std::string density_csv(const EmpiricalDensity& density) {
    std::string out = "bin_left,bin_right,probability\n";
    for (std::size_t i = 0; i < density.bins(); ++i) {
        out += format_double(density.edges[i]);
        out += ',';
        out += format_double(density.edges[i + 1]);
        out += ',';
        out += format_double(density.probabilities[i]);
        out += '\n';
    }
    return out;
}

EmpiricalDensity read_density_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open density file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigSyntaxError("density file '" + path.string() + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "bin_left,bin_right,probability") {
        throw ConfigSyntaxError("density file header must be 'bin_left,bin_right,probability'");
    }
    EmpiricalDensity d;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        double left = 0, right = 0, p = 0;
        char tail = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &left, &right, &p, &tail) < 3) {
            throw ConfigSyntaxError("density file row " + std::to_string(row) + " is malformed");
        }
        if (d.edges.empty()) {
            d.edges.push_back(left);
        } else if (left != d.edges.back()) {
            throw ConfigError("density file row " + std::to_string(row) + ": bins must be contiguous");
        }
        d.edges.push_back(right);
        d.probabilities.push_back(p);
    }
    double total = 0;
    for (double p : d.probabilities) total += p;
    d.normalized = std::abs(total - 1.0) <= 1e-9;
    d.validate();
    return d;
}

OutputSink::OutputSink(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
        throw IoError("cannot create output directory '" + dir_.string() + "'");
    }
}

void OutputSink::write(const std::string& name, const std::string& content) {
    const std::filesystem::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    files_.emplace_back(name, sha256_hex(content));
}

void OutputSink::write_json(const std::string& name, const json& doc) { write(name, doc.dump(2) + "\n"); }

void OutputSink::finish(const json& parameters, std::uint64_t seed, const std::vector<std::string>& known) {
    for (const std::string& name : known) {
        const bool written = std::any_of(files_.begin(), files_.end(), [&](const auto& f) { return f.first == name; });
        if (!written) {
            std::error_code ec;
            std::filesystem::remove(dir_ / name, ec);
        }
    }
    json files = json::array();
    for (const auto& [name, hash] : files_) files.push_back({{"name", name}, {"sha256", hash}});
    const json manifest{{"version", QHO_VERSION}, {"parameters", parameters}, {"seed", seed}, {"files", files}};
    const std::string content = manifest.dump(2) + "\n";
    const std::filesystem::path path = dir_ / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;

    [[nodiscard]] double px(double x) const {
        return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
    }
    [[nodiscard]] double py(double y) const {
        return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
    }
};

void widen(double& lo, double& hi) {
    if (!(hi > lo)) {
        const double pad = std::max(std::abs(lo), 1.0) * 1e-6;
        lo -= pad;
        hi += pad;
    }
}

std::string header(const std::string& title, const std::string& x_label, const std::string& y_label,
                   const Frame& f) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    s << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
      << "</text>\n";
    s << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << escape(x_label) << "</text>\n";
    s << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << escape(y_label) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        s << "<text x=\"" << fmt(f.px(xv)) << "\" y=\"" << kHeight - kBottom + 16
          << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xv) << "</text>\n";
        s << "<text x=\"" << kLeft - 4 << "\" y=\"" << fmt(f.py(yv) + 3)
          << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(yv) << "</text>\n";
    }
    return s.str();
}

}  // namespace

std::string svg_line_plot(const SvgSeries& series) {
    if (series.x.size() != series.y.size() || series.x.empty()) {
        throw LengthError("svg_line_plot: x and y must be non-empty and equally long");
    }
    Frame f{*std::min_element(series.x.begin(), series.x.end()), *std::max_element(series.x.begin(), series.x.end()),
            *std::min_element(series.y.begin(), series.y.end()), *std::max_element(series.y.begin(), series.y.end())};
    widen(f.x0, f.x1);
    widen(f.y0, f.y1);
    std::ostringstream s;
    s << header(series.title, series.x_label, series.y_label, f);
    s << "<polyline class=\"series\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < series.x.size(); ++i) {
        if (i) s << ' ';
        s << fmt(f.px(series.x[i])) << ',' << fmt(f.py(series.y[i]));
    }
    s << "\"/>\n</svg>\n";
    return s.str();
}

std::string svg_histogram(const EmpiricalDensity& density, const std::string& title, const std::string& x_label) {
    density.validate();
    std::vector<double> heights(density.bins());
    for (std::size_t i = 0; i < density.bins(); ++i) heights[i] = density.probabilities[i] / density.width(i);
    Frame f{density.edges.front(), density.edges.back(), 0.0,
            heights.empty() ? 1.0 : *std::max_element(heights.begin(), heights.end())};
    widen(f.x0, f.x1);
    widen(f.y0, f.y1);
    std::ostringstream s;
    s << header(title, x_label, "probability density", f);
    for (std::size_t i = 0; i < density.bins(); ++i) {
        const double x0 = f.px(density.edges[i]);
        const double x1 = f.px(density.edges[i + 1]);
        const double top = f.py(heights[i]);
        s << "<rect class=\"bin\" x=\"" << fmt(x0) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(x1 - x0)
          << "\" height=\"" << fmt(f.py(0.0) - top) << "\" fill=\"steelblue\" stroke=\"none\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace qho
