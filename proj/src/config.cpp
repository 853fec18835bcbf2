#include "qho/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "qho/errors.hpp"

namespace qho {

using nlohmann::json;

double photon_energy(double wavelength) {
    constexpr double h = 6.62607015e-34;
    constexpr double c = 299792458.0;
    return h * c / wavelength;
}

MediumParams MediumBlock::params() const {
    return MediumParams::from_scaled(wavelength, n0, kx, ky, g, length_unit);
}

double MediumBlock::scale_curvature(double k) const { return k / std::pow(length_unit, 4); }

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigSyntaxError("config key '" + path + "' must be an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || item.key() == a;
        if (!known) throw ConfigSyntaxError("unknown config key '" + join(path, item.key()) + "'");
    }
}

void read(const json& j, const char* key, const std::string& path, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigSyntaxError("config key '" + join(path, key) + "' must be a number");
    out = v.get<double>();
}

void read(const json& j, const char* key, const std::string& path, std::optional<double>& out) {
    if (!j.contains(key)) return;
    double v = 0;
    read(j, key, path, v);
    out = v;
}

template <typename Int>
void read_int(const json& j, const char* key, const std::string& path, Int& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigSyntaxError("config key '" + join(path, key) + "' must be an integer");
    if constexpr (std::is_unsigned_v<Int>) {
        if (v.is_number_unsigned()) {
            out = v.get<Int>();
        } else if (v.get<long long>() < 0) {
            throw ConfigError("config key '" + join(path, key) + "' must be non-negative");
        } else {
            out = static_cast<Int>(v.get<long long>());
        }
    } else {
        out = v.get<Int>();
    }
}

void read(const json& j, const char* key, const std::string& path, std::string& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigSyntaxError("config key '" + join(path, key) + "' must be a string");
    out = v.get<std::string>();
}

template <typename Enum>
Enum parse_enum(const std::string& value, const std::string& key,
                std::initializer_list<std::pair<const char*, Enum>> options) {
    for (const auto& [name, e] : options) {
        if (value == name) return e;
    }
    std::string names;
    for (const auto& o : options) names += std::string(names.empty() ? "" : ", ") + o.first;
    throw ConfigError("config key '" + key + "' must be one of: " + names);
}

const char* pattern_name(LevelPattern p) { return p == LevelPattern::shell ? "shell" : "uniform"; }
const char* zero_point_name(ZeroPoint z) { return z == ZeroPoint::consistent ? "consistent" : "as_printed"; }
const char* norm_name(SmallScaleNorm n) { return n == SmallScaleNorm::sqrt_mean ? "sqrt" : "mean_one"; }
const char* product_name(DensityProduct p) {
    return p == DensityProduct::pointwise ? "pointwise" : "product_variable";
}
const char* ea_name(EaMode m) { return m == EaMode::as_printed ? "as_printed" : "standard"; }

void apply_medium(MediumBlock& m, const json& j) {
    const std::string p = "medium";
    check_keys(j, p, {"wavelength", "n0", "kx", "ky", "g", "length_unit"});
    read(j, "wavelength", p, m.wavelength);
    read(j, "n0", p, m.n0);
    read(j, "kx", p, m.kx);
    read(j, "ky", p, m.ky);
    read(j, "g", p, m.g);
    read(j, "length_unit", p, m.length_unit);
}

void apply_cluster(ClusterBlock& c, const json& j) {
    const std::string p = "cluster";
    check_keys(j, p, {"n1", "n2", "level", "level_pattern", "photons", "mu", "sigma1", "sigma2", "zero_point"});
    read_int(j, "n1", p, c.n1);
    read_int(j, "n2", p, c.n2);
    read_int(j, "level", p, c.level);
    read(j, "mu", p, c.mu);
    read(j, "sigma1", p, c.sigma1);
    read(j, "sigma2", p, c.sigma2);
    std::string s;
    read(j, "level_pattern", p, s);
    if (!s.empty()) {
        c.pattern = parse_enum<LevelPattern>(s, "cluster.level_pattern",
                                             {{"shell", LevelPattern::shell}, {"uniform", LevelPattern::uniform}});
    }
    s.clear();
    read(j, "zero_point", p, s);
    if (!s.empty()) {
        c.zero_point = parse_enum<ZeroPoint>(s, "cluster.zero_point",
                                             {{"consistent", ZeroPoint::consistent}, {"as_printed", ZeroPoint::as_printed}});
    }
    if (j.contains("photons")) {
        const json& list = j.at("photons");
        if (!list.is_array()) throw ConfigSyntaxError("config key 'cluster.photons' must be an array");
        c.photons.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string pp = "cluster.photons[" + std::to_string(i) + "]";
            check_keys(list[i], pp, {"cluster", "index", "ex", "ey", "kx", "ky"});
            PhotonSpec ph;
            read_int(list[i], "cluster", pp, ph.cluster);
            read_int(list[i], "index", pp, ph.index);
            read_int(list[i], "ex", pp, ph.ex);
            read_int(list[i], "ey", pp, ph.ey);
            read(list[i], "kx", pp, ph.kx);
            read(list[i], "ky", pp, ph.ky);
            c.photons.push_back(ph);
        }
    }
}

void apply_grid(GridBlock& g, const json& j) {
    const std::string p = "grid";
    check_keys(j, p, {"nx", "ny", "half_width", "nz", "z_start", "hz_wavelengths", "probe", "rayleigh_range"});
    read_int(j, "nx", p, g.nx);
    read_int(j, "ny", p, g.ny);
    read_int(j, "nz", p, g.nz);
    read(j, "half_width", p, g.half_width);
    read(j, "z_start", p, g.z_start);
    read(j, "hz_wavelengths", p, g.hz_wavelengths);
    read(j, "rayleigh_range", p, g.rayleigh_range);
    if (j.contains("probe")) {
        const json& pr = j.at("probe");
        if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number() || !pr[1].is_number()) {
            throw ConfigSyntaxError("config key 'grid.probe' must be [x, y]");
        }
        g.probe = Probe{pr[0].get<double>(), pr[1].get<double>()};
    }
}

void apply_windows(WindowBlock& w, const json& j) {
    const std::string p = "windows";
    check_keys(j, p, {"short", "long", "small_scale_norm"});
    read(j, "short", p, w.short_window);
    read(j, "long", p, w.long_window);
    std::string s;
    read(j, "small_scale_norm", p, s);
    if (!s.empty()) {
        w.norm = parse_enum<SmallScaleNorm>(s, "windows.small_scale_norm",
                                            {{"sqrt", SmallScaleNorm::sqrt_mean}, {"mean_one", SmallScaleNorm::mean_one}});
    }
}

void apply_density(DensityBlock& d, const json& j) {
    const std::string p = "density";
    check_keys(j, p, {"bins", "product"});
    read_int(j, "bins", p, d.bins);
    std::string s;
    read(j, "product", p, s);
    if (!s.empty()) {
        d.product = parse_enum<DensityProduct>(
            s, "density.product",
            {{"pointwise", DensityProduct::pointwise}, {"product_variable", DensityProduct::product_variable}});
    }
}

void apply_noise(HybridNoiseSpec& n, const json& j) {
    const std::string p = "noise";
    check_keys(j, p, {"sigma_g2", "mu_g", "lambda_p", "hbar_f"});
    read(j, "sigma_g2", p, n.sigma_g2);
    read(j, "mu_g", p, n.mu_g);
    read(j, "lambda_p", p, n.lambda_p);
    read(j, "hbar_f", p, n.quantum);
}

void apply_capacity(CapacityBlock& c, const json& j) {
    const std::string p = "capacity";
    check_keys(j, p, {"bandwidth", "power", "n0", "hbar_f", "noise_n", "chi", "ea_mode"});
    read(j, "bandwidth", p, c.inputs.bandwidth);
    read(j, "power", p, c.inputs.power);
    read(j, "n0", p, c.inputs.noise_psd);
    read(j, "hbar_f", p, c.inputs.photon_energy);
    read(j, "noise_n", p, c.inputs.quantum_noise);
    read(j, "chi", p, c.inputs.chi);
    std::string s;
    read(j, "ea_mode", p, s);
    if (!s.empty()) {
        c.ea_mode = parse_enum<EaMode>(s, "capacity.ea_mode",
                                       {{"as_printed", EaMode::as_printed}, {"standard", EaMode::standard}});
    }
}

void apply_ck(CKBlock& c, const json& j) {
    const std::string p = "ck";
    check_keys(j, p, {"omega", "omega_c", "quantization", "branch"});
    read(j, "omega", p, c.inputs.omega);
    read(j, "omega_c", p, c.inputs.omega_c);
    read(j, "quantization", p, c.inputs.quantization);
    std::string s;
    read(j, "branch", p, s);
    if (s == "auto") {
        c.auto_branch = true;
    } else if (!s.empty()) {
        c.auto_branch = false;
        c.inputs.branch = parse_enum<Branch>(s, "ck.branch", {{"plus", Branch::plus}, {"minus", Branch::minus}});
    }
}

RunConfig default_config() {
    RunConfig cfg;
    const double hf = photon_energy(cfg.medium.wavelength);
    cfg.noise.sigma_g2 = 1e-19;
    cfg.noise.lambda_p = 1.0;
    cfg.noise.quantum = hf;
    cfg.capacity.inputs.bandwidth = 1e9;
    cfg.capacity.inputs.power = 1e-9;
    cfg.capacity.inputs.noise_psd = 1e-19;
    cfg.capacity.inputs.photon_energy = hf;
    cfg.capacity.inputs.quantum_noise = hf;
    cfg.capacity.inputs.chi = 1.0;
    cfg.ck.inputs.omega = 1.0;
    cfg.ck.inputs.omega_c = 1.0;
    cfg.ck.inputs.quantization = 4.0 * 3.14159265358979323846;
    return cfg;
}

}  // namespace

RunConfig preset_config(const std::string& name) {
    RunConfig cfg = default_config();
    if (name.empty() || name == "none") return cfg;
    cfg.preset = name;
    if (name == "fig1") {
        cfg.medium.kx = 1.2;
        cfg.medium.ky = 1.5;
        cfg.medium.g = 0.25;
    } else if (name == "fig2") {
        cfg.medium.kx = 3.5;
        cfg.medium.ky = 5.0;
        cfg.medium.g = 0.5;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig1 or fig2)");
    }
    return cfg;
}

RunConfig apply_config_json(RunConfig cfg, const json& doc) {
    check_keys(doc, "", {"preset", "medium", "cluster", "grid", "windows", "density", "noise", "capacity", "ck",
                         "seed", "output", "emit", "workers", "monte_carlo_draws"});
    if (doc.contains("preset")) {
        std::string name;
        read(doc, "preset", "", name);
        // A preset named inside the file only seeds values not set elsewhere in it.
        RunConfig base = preset_config(name);
        cfg.preset = base.preset;
        cfg.medium = base.medium;
    }
    if (doc.contains("medium")) apply_medium(cfg.medium, doc.at("medium"));
    if (doc.contains("cluster")) apply_cluster(cfg.cluster, doc.at("cluster"));
    if (doc.contains("grid")) apply_grid(cfg.grid, doc.at("grid"));
    if (doc.contains("windows")) apply_windows(cfg.windows, doc.at("windows"));
    if (doc.contains("density")) apply_density(cfg.density, doc.at("density"));
    if (doc.contains("noise")) apply_noise(cfg.noise, doc.at("noise"));
    if (doc.contains("capacity")) apply_capacity(cfg.capacity, doc.at("capacity"));
    if (doc.contains("ck")) apply_ck(cfg.ck, doc.at("ck"));
    read_int(doc, "seed", "", cfg.seed);
    read_int(doc, "workers", "", cfg.workers);
    read_int(doc, "monte_carlo_draws", "", cfg.monte_carlo_draws);
    if (doc.contains("output")) {
        std::string out;
        read(doc, "output", "", out);
        cfg.output = out;
    }
    if (doc.contains("emit")) {
        const json& e = doc.at("emit");
        if (e.is_string()) {
            cfg.emit = parse_emit_flags(e.get<std::string>());
        } else if (e.is_array()) {
            std::string list;
            for (const json& item : e) {
                if (!item.is_string()) throw ConfigSyntaxError("config key 'emit' must list strings");
                list += (list.empty() ? "" : ",") + item.get<std::string>();
            }
            cfg.emit = parse_emit_flags(list);
        } else {
            throw ConfigSyntaxError("config key 'emit' must be a string or an array of strings");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, const std::string& preset) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigSyntaxError("malformed config '" + path.string() + "': " + e.what());
    }
    return apply_config_json(preset_config(preset), doc);
}

EmitFlags parse_emit_flags(const std::string& list) {
    EmitFlags flags{false, false, false};
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "csv") {
            flags.csv = true;
        } else if (item == "json") {
            flags.json = true;
        } else if (item == "svg") {
            flags.svg = true;
        } else if (!item.empty()) {
            throw ConfigError("unknown emit flag '" + item + "' (expected csv, json, svg)");
        }
    }
    return flags;
}

void RunConfig::validate() const {
    const MediumParams m = medium.params();
    if (!(medium.length_unit > 0)) throw ConfigError("medium.length_unit must be positive");
    if (cluster.n1 < 1 || cluster.n2 < 1) throw ConfigError("cluster.n1 and cluster.n2 must be >= 1");
    if (cluster.level < 0 || cluster.level > kMaxOscillatorIndex) throw ConfigError("cluster.level out of range");
    cluster_config().validate();
    if (grid.nx < 1 || grid.ny < 1) throw ConfigError("grid.nx and grid.ny must be >= 1");
    if (grid.half_width && !(*grid.half_width > 0)) throw ConfigError("grid.half_width must be positive");
    if (!(grid.hz_wavelengths > 0)) throw ConfigError("grid.hz_wavelengths must be positive");
    if (grid.rayleigh_range && !(*grid.rayleigh_range > 0)) throw ConfigError("grid.rayleigh_range must be positive");
    if (!(windows.short_window > 0) || !(windows.short_window < windows.long_window)) {
        throw ConfigError("windows must satisfy 0 < short < long");
    }
    const std::size_t long_samples = window_samples(windows.long_window, m.wavelength(), z_axis().step);
    if (grid.nz < long_samples) {
        throw ConfigError("grid.nz = " + std::to_string(grid.nz) + " is shorter than the long window (" +
                          std::to_string(long_samples) + " samples)");
    }
    noise.validate();
    capacity.inputs.validate();
    ck.inputs.validate();
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (monte_carlo_draws < 1) throw ConfigError("monte_carlo_draws must be >= 1");
    (void)m;
}

ClusterConfig RunConfig::cluster_config() const {
    const MediumParams m = medium.params();
    if (cluster.photons.empty()) {
        ClusterConfig c = ClusterConfig::build(cluster.n1, cluster.n2, cluster.level, m, cluster.pattern);
        c.mu = cluster.mu;
        c.sigma1 = cluster.sigma1;
        c.sigma2 = cluster.sigma2;
        return c;
    }
    ClusterConfig c;
    c.n1 = cluster.n1;
    c.n2 = cluster.n2;
    c.mu = cluster.mu;
    c.sigma1 = cluster.sigma1;
    c.sigma2 = cluster.sigma2;
    for (const PhotonSpec& p : cluster.photons) {
        try {
            c.photons.push_back(Photon{p.cluster, p.index, OscillatorIndex(p.ex), OscillatorIndex(p.ey),
                                       medium.scale_curvature(p.kx.value_or(medium.kx)),
                                       medium.scale_curvature(p.ky.value_or(medium.ky))});
        } catch (const InvariantError& e) {
            throw ConfigError("photon (" + std::to_string(p.cluster) + ", " + std::to_string(p.index) +
                              "): " + e.what());
        }
    }
    return c;
}

double RunConfig::waist() const {
    const MediumParams m = medium.params();
    const NormalModes modes = rotation_angle(m);
    return std::sqrt(2.0 / std::sqrt(modes.omega_x * modes.omega_y));
}

double RunConfig::rayleigh_range() const {
    if (grid.rayleigh_range) return *grid.rayleigh_range;
    const double w0 = waist();
    return medium.params().k0() * w0 * w0 / 2.0;
}

Axis RunConfig::x_axis() const { return Axis::centered(grid.half_width.value_or(waist()), grid.nx); }
Axis RunConfig::y_axis() const { return Axis::centered(grid.half_width.value_or(waist()), grid.ny); }

Axis RunConfig::z_axis() const {
    return Axis{grid.z_start, grid.hz_wavelengths * medium.wavelength, grid.nz};
}

Probe RunConfig::probe() const {
    if (grid.probe) return *grid.probe;
    const double w0 = waist();
    return Probe{0.5 * w0, 0.5 * w0};
}

json config_to_json(const RunConfig& cfg) {
    json photons = json::array();
    for (const PhotonSpec& p : cfg.cluster.photons) {
        json ph = {{"cluster", p.cluster}, {"index", p.index}, {"ex", p.ex}, {"ey", p.ey}};
        if (p.kx) ph["kx"] = *p.kx;
        if (p.ky) ph["ky"] = *p.ky;
        photons.push_back(ph);
    }
    const Probe probe = cfg.probe();
    json emit = json::array();
    if (cfg.emit.csv) emit.push_back("csv");
    if (cfg.emit.json) emit.push_back("json");
    if (cfg.emit.svg) emit.push_back("svg");
    return json{
        {"preset", cfg.preset},
        {"medium",
         {{"wavelength", cfg.medium.wavelength},
          {"n0", cfg.medium.n0},
          {"kx", cfg.medium.kx},
          {"ky", cfg.medium.ky},
          {"g", cfg.medium.g},
          {"length_unit", cfg.medium.length_unit}}},
        {"cluster",
         {{"n1", cfg.cluster.n1},
          {"n2", cfg.cluster.n2},
          {"level", cfg.cluster.level},
          {"level_pattern", pattern_name(cfg.cluster.pattern)},
          {"photons", photons},
          {"mu", cfg.cluster.mu},
          {"sigma1", cfg.cluster.sigma1},
          {"sigma2", cfg.cluster.sigma2},
          {"zero_point", zero_point_name(cfg.cluster.zero_point)}}},
        {"grid",
         {{"nx", cfg.grid.nx},
          {"ny", cfg.grid.ny},
          {"half_width", cfg.grid.half_width.value_or(cfg.waist())},
          {"nz", cfg.grid.nz},
          {"z_start", cfg.grid.z_start},
          {"hz_wavelengths", cfg.grid.hz_wavelengths},
          {"probe", {probe.x, probe.y}},
          {"rayleigh_range", cfg.rayleigh_range()}}},
        {"windows",
         {{"short", cfg.windows.short_window},
          {"long", cfg.windows.long_window},
          {"small_scale_norm", norm_name(cfg.windows.norm)}}},
        {"density", {{"bins", cfg.density.bins}, {"product", product_name(cfg.density.product)}}},
        {"noise",
         {{"sigma_g2", cfg.noise.sigma_g2},
          {"mu_g", cfg.noise.mu_g},
          {"lambda_p", cfg.noise.lambda_p},
          {"hbar_f", cfg.noise.quantum}}},
        {"capacity",
         {{"bandwidth", cfg.capacity.inputs.bandwidth},
          {"power", cfg.capacity.inputs.power},
          {"n0", cfg.capacity.inputs.noise_psd},
          {"hbar_f", cfg.capacity.inputs.photon_energy},
          {"noise_n", cfg.capacity.inputs.quantum_noise},
          {"chi", cfg.capacity.inputs.chi},
          {"ea_mode", ea_name(cfg.capacity.ea_mode)}}},
        {"ck",
         {{"omega", cfg.ck.inputs.omega},
          {"omega_c", cfg.ck.inputs.omega_c},
          {"quantization", cfg.ck.inputs.quantization},
          {"branch", cfg.ck.auto_branch ? "auto" : (cfg.ck.inputs.branch == Branch::plus ? "plus" : "minus")}}},
        {"seed", cfg.seed},
        {"output", cfg.output.string()},
        {"emit", emit},
        {"workers", cfg.workers},
        {"monte_carlo_draws", cfg.monte_carlo_draws},
    };
}

}  // namespace qho
