#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qho/capacity.hpp"
#include "qho/ck_solver.hpp"
#include "qho/config.hpp"
#include "qho/envelope_stats.hpp"
#include "qho/errors.hpp"
#include "qho/field_model.hpp"
#include "qho/noise_model.hpp"
#include "qho/pipeline.hpp"
#include "qho/special_fn.hpp"
#include "qho/verify.hpp"

namespace py = pybind11;

namespace {

qho::CapacityInputs capacity_inputs(double bandwidth, double power, double noise_psd, double photon_energy,
                                    double quantum_noise, double chi) {
    return qho::CapacityInputs{bandwidth, power, noise_psd, photon_energy, quantum_noise, chi};
}

qho::EaMode ea_mode(const std::string& name) {
    if (name == "as_printed") return qho::EaMode::as_printed;
    if (name == "standard") return qho::EaMode::standard;
    throw qho::ParameterError("ea mode must be 'as_printed' or 'standard'");
}

qho::RunConfig load_config(const std::string& config, const std::string& preset) {
    qho::RunConfig cfg = config.empty() ? qho::preset_config(preset) : qho::parse_config(config, preset);
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quadratic-index photon cluster channel: special functions, field, envelope, noise, capacity";
    m.attr("__version__") = QHO_VERSION;

    auto base = py::register_exception<qho::Error>(m, "QhoError");
    py::register_exception<qho::InvariantError>(m, "InvariantError", base.ptr());
    py::register_exception<qho::NumericError>(m, "NumericError", base.ptr());
    py::register_exception<qho::IoError>(m, "IoError", base.ptr());
    py::register_exception<qho::ConfigSyntaxError>(m, "ConfigSyntaxError", base.ptr());
    py::register_exception<qho::StageError>(m, "StageError");

    m.def("hermite_poly", [](int n, double x) { return qho::hermite_poly(n, x); }, py::arg("n"), py::arg("x"));
    m.def("ho_wavefunction", [](int n, double b) { return qho::ho_wavefunction(n, b); }, py::arg("n"),
          py::arg("b"));
    m.def(
        "gauss_hermite",
        [](int order) {
            const qho::GaussHermiteRule r = qho::gauss_hermite(order);
            return py::make_tuple(r.nodes, r.weights);
        },
        py::arg("order"));

    m.def(
        "rotation_angle",
        [](double kx, double ky, double g) {
            const qho::NormalModes n = qho::rotation_angle(kx, ky, g);
            py::dict d;
            d["theta"] = n.theta;
            d["kappa_plus"] = n.kappa_plus;
            d["kappa_minus"] = n.kappa_minus;
            d["omega_x"] = n.omega_x;
            d["omega_y"] = n.omega_y;
            return d;
        },
        py::arg("kx"), py::arg("ky"), py::arg("g"));
    m.def(
        "tem_mode",
        [](int l, int mm, double x, double y, double z, double b, double wavelength) {
            return qho::tem_mode(l, mm, x, y, z, b, wavelength);
        },
        py::arg("l"), py::arg("m"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("rayleigh_range"),
        py::arg("wavelength"));

    m.def("moving_average", py::overload_cast<const std::vector<double>&, std::size_t>(&qho::moving_average),
          py::arg("series"), py::arg("window"));
    m.def(
        "decompose_envelope",
        [](const std::vector<double>& values, double hz, double wavelength, double short_window,
           double long_window) {
            qho::EnvelopeSeries s{qho::Axis{0.0, hz, values.size()}, values, wavelength};
            const qho::EnvelopeDecomposition d =
                qho::decompose_envelope(s, qho::DecompositionOptions{short_window, long_window});
            return py::make_tuple(d.small_scale, d.large_scale);
        },
        py::arg("values"), py::arg("hz"), py::arg("wavelength"), py::arg("short_window") = 4.0,
        py::arg("long_window") = 150.0);
    m.def(
        "estimate_density",
        [](const std::vector<double>& samples, std::size_t bins) {
            const qho::EmpiricalDensity d = qho::estimate_density(samples, qho::BinSpec{bins, std::nullopt});
            return py::make_tuple(d.edges, d.probabilities);
        },
        py::arg("samples"), py::arg("bins") = 0);

    m.def(
        "hybrid_moments",
        [](double sigma_g2, double mu_g, double lambda_p, double quantum) {
            const qho::NoiseMoments n = qho::hybrid_moments(qho::HybridNoiseSpec{sigma_g2, mu_g, lambda_p, quantum});
            return py::make_tuple(n.mean, n.variance);
        },
        py::arg("sigma_g2"), py::arg("mu_g"), py::arg("lambda_p"), py::arg("hbar_f"));
    m.def(
        "hybrid_density",
        [](double sigma_g2, double mu_g, double lambda_p, double quantum, double x) {
            return qho::hybrid_density(qho::HybridNoiseSpec{sigma_g2, mu_g, lambda_p, quantum}, x);
        },
        py::arg("sigma_g2"), py::arg("mu_g"), py::arg("lambda_p"), py::arg("hbar_f"), py::arg("x"));
    m.def(
        "sample_hybrid_noise",
        [](double sigma_g2, double mu_g, double lambda_p, double quantum, std::size_t count, std::uint64_t seed) {
            return qho::sample_hybrid_noise(qho::HybridNoiseSpec{sigma_g2, mu_g, lambda_p, quantum}, count, seed);
        },
        py::arg("sigma_g2"), py::arg("mu_g"), py::arg("lambda_p"), py::arg("hbar_f"), py::arg("count"),
        py::arg("seed"));

    m.def("g_entropy", &qho::g_entropy, py::arg("x"));
    m.def(
        "capacities",
        [](double bandwidth, double power, double noise_psd, double photon_energy, double quantum_noise, double chi,
           const std::string& mode) {
            const qho::CapacityReport r = qho::capacity_report(
                capacity_inputs(bandwidth, power, noise_psd, photon_energy, quantum_noise, chi), ea_mode(mode),
                noise_psd, nullptr);
            return r.to_json().dump();
        },
        py::arg("bandwidth"), py::arg("power"), py::arg("noise_psd"), py::arg("hbar_f"), py::arg("noise_n") = 0.0,
        py::arg("chi") = 1.0, py::arg("ea_mode") = "as_printed");

    m.def(
        "ck_params",
        [](double omega, double omega_c, double quantization) {
            const qho::CKInputs in{omega, omega_c, quantization, qho::Branch::minus};
            return qho::ck_params_json(qho::derive_ck_params_auto(in), in).dump();
        },
        py::arg("omega"), py::arg("omega_c"), py::arg("quantization"));

    m.def(
        "run_pipeline",
        [](const std::string& config, const std::string& preset, const std::string& out, std::uint64_t seed,
           const std::string& emit) {
            qho::RunConfig cfg = load_config(config, preset);
            cfg.output = out;
            cfg.seed = seed;
            if (!emit.empty()) cfg.emit = qho::parse_emit_flags(emit);
            const qho::RunArtifacts a = [&] {
                py::gil_scoped_release release;
                return qho::run_pipeline(cfg);
            }();
            qho::emit_outputs(a);
            return a.capacity.to_json().dump();
        },
        py::arg("config") = "", py::arg("preset") = "fig1", py::arg("out") = "qho_out", py::arg("seed") = 0,
        py::arg("emit") = "csv,json,svg");

    m.def("selftest", [] {
        py::list out;
        for (const qho::CheckResult& r : qho::run_selftest()) out.append(py::make_tuple(r.name, r.passed, r.detail));
        return out;
    });
}
