#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qho/special_fn.hpp"

namespace qho {

using Complex = std::complex<double>;

/// Inhomogeneous quadratic-index medium
///   k^2(x, y) = k0^2 - (kx x^2 + ky y^2) + 2 g x y,   k0 = 2 pi n0 / lambda.
/// All stored values are SI (kx, ky, g in m^-4).
class MediumParams {
public:
    /// Coefficients given directly in SI.
    static MediumParams create(double wavelength, double n0, double kx, double ky, double g);
    /// Coefficients given in units of `length_unit` (kx in length_unit^-4); the
    /// GRIN presets are written in micrometres.
    static MediumParams from_scaled(double wavelength, double n0, double kx, double ky, double g,
                                    double length_unit);

    [[nodiscard]] double wavelength() const { return wavelength_; }
    [[nodiscard]] double n0() const { return n0_; }
    [[nodiscard]] double k0() const { return k0_; }
    [[nodiscard]] double kx() const { return kx_; }
    [[nodiscard]] double ky() const { return ky_; }
    [[nodiscard]] double g() const { return g_; }

    /// Same medium with a different transverse curvature (validated again).
    [[nodiscard]] MediumParams with_curvature(double kx, double ky) const;

    /// V(x, y) = kx x^2 + ky y^2 - 2 g x y, so k^2 = k0^2 - V.
    [[nodiscard]] double potential(double x, double y) const;

private:
    MediumParams() = default;
    double wavelength_ = 0, n0_ = 1, k0_ = 0, kx_ = 0, ky_ = 0, g_ = 0;
};

/// Diagonalized transverse quadratic form. u = x cos(theta) - y sin(theta),
/// v = x sin(theta) + y cos(theta) gives V = kappa_plus u^2 + kappa_minus v^2.
struct NormalModes {
    double theta = 0;
    double kappa_plus = 0;
    double kappa_minus = 0;
    double omega_x = 0;  // sqrt(kappa_plus), frequency along u
    double omega_y = 0;  // sqrt(kappa_minus), frequency along v
};

/// theta = atan2(2g, kx - ky) / 2 and the eigenvalues of [[kx, -g], [-g, ky]].
NormalModes rotation_angle(double kx, double ky, double g);
NormalModes rotation_angle(const MediumParams& params);

struct BeamGeometry {
    double rayleigh_range = 0;
    double waist = 0;      // w0 = sqrt(lambda b / pi)
    double radius = 0;     // w(z)
    double curvature = 0;  // 1 / R(z); 0 at the waist
    double gouy = 0;       // atan(z / b)
};

BeamGeometry beam_geometry(double z, double rayleigh_range, double wavelength);

/// Free-space Hermite-Gauss mode psi_lm at (x, y, z), wave number 2 pi / lambda.
Complex tem_mode(OscillatorIndex l, OscillatorIndex m, double x, double y, double z,
                 double rayleigh_range, double wavelength);

/// Uniformly spaced axis: start + i * step, i < count.
struct Axis {
    double start = 0;
    double step = 1;
    std::size_t count = 0;

    [[nodiscard]] double operator[](std::size_t i) const { return start + static_cast<double>(i) * step; }
    [[nodiscard]] double back() const { return (*this)[count - 1]; }
    [[nodiscard]] std::vector<double> values() const;

    /// Symmetric axis over [-half_width, half_width] with `count` nodes.
    static Axis centered(double half_width, std::size_t count);
};

/// Complex field samples on a rectilinear (x, y, z) grid, x fastest.
class FieldGrid {
public:
    FieldGrid(Axis x, Axis y, Axis z);

    [[nodiscard]] const Axis& x() const { return x_; }
    [[nodiscard]] const Axis& y() const { return y_; }
    [[nodiscard]] const Axis& z() const { return z_; }

    [[nodiscard]] std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return (iz * y_.count + iy) * x_.count + ix;
    }
    Complex& at(std::size_t ix, std::size_t iy, std::size_t iz) { return data_[index(ix, iy, iz)]; }
    [[nodiscard]] const Complex& at(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return data_[index(ix, iy, iz)];
    }

    [[nodiscard]] std::vector<Complex>& data() { return data_; }
    [[nodiscard]] const std::vector<Complex>& data() const { return data_; }

    /// Throws GridError when any sample is not finite.
    void check_finite() const;

    FieldGrid& operator+=(const FieldGrid& other);

    /// Trapezoid-rule integral of |E|^2 over the transverse plane at slice iz.
    [[nodiscard]] double transverse_norm2(std::size_t iz) const;

private:
    Axis x_, y_, z_;
    std::vector<Complex> data_;
};

/// Phasors of the paraxial electric field (x-hat and z-hat components).
struct VectorField {
    FieldGrid ex;
    FieldGrid ez;

    /// Real field at t = 0.
    [[nodiscard]] double real_x(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return ex.at(ix, iy, iz).real();
    }
    [[nodiscard]] double real_z(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return ez.at(ix, iy, iz).real();
    }
};

/// E = (x-hat omega psi + z-hat i c dpsi/dx) e^{i k z}, with k = k0 of `params`.
/// dpsi/dx by central differences (one-sided second order at the ends).
VectorField electric_field_paraxial(const FieldGrid& psi, const MediumParams& params, double omega);

/// Zero-point phase in the single-channel field. `consistent` solves the
/// paraxial equation exactly; `as_printed` keeps the (w_x + w_y)/k0 factor.
enum class ZeroPoint { consistent, as_printed };

/// Sign of the coordinate rotation applied to the product mode. `forward` is
/// the one that diagonalizes the medium; `reversed` exists for negative tests.
enum class RotationSign { forward, reversed };

struct PropagationOptions {
    ZeroPoint zero_point = ZeroPoint::consistent;
    RotationSign rotation = RotationSign::forward;
    unsigned workers = 1;  // z-slabs evaluated in parallel; output is identical
};

/// Longitudinal propagation constant of level (ex, ey) in the medium.
double propagation_constant(OscillatorIndex ex, OscillatorIndex ey, const MediumParams& params,
                            ZeroPoint zero_point = ZeroPoint::consistent);

/// Rotated, normalized product mode (wx wy)^{1/4} phi_ex(sqrt(wx) u) phi_ey(sqrt(wy) v).
double transverse_mode(OscillatorIndex ex, OscillatorIndex ey, const NormalModes& modes, double x,
                       double y, RotationSign rotation = RotationSign::forward);

/// Single-channel propagation field of one oscillator pair.
FieldGrid propagate_single(OscillatorIndex ex, OscillatorIndex ey, const Axis& x, const Axis& y,
                           const Axis& z, const MediumParams& params,
                           const PropagationOptions& options = {});

/// One photon of the transmitter (cluster 1) or receiver (cluster 2) cluster.
struct Photon {
    int cluster = 1;  // 1 or 2
    int index = 1;    // 1 .. N_cluster
    OscillatorIndex ex;
    OscillatorIndex ey;
    double kx = 0;  // SI
    double ky = 0;  // SI
};

enum class LevelPattern { uniform, shell };

struct ClusterConfig {
    int n1 = 4;
    int n2 = 4;
    std::vector<Photon> photons;
    double mu = 0;      // inter-cluster entanglement strength
    double sigma1 = 0;  // intra-cluster strengths
    double sigma2 = 0;

    /// Every photon gets the medium's (kx, ky). `uniform` puts every photon at
    /// (level, level); `shell` gives photon j the pair (level + s, level - s)
    /// with s = 0, +1, -1, +2, ... (|s| <= level, sign flipped in cluster 2).
    static ClusterConfig build(int n1, int n2, int level, const MediumParams& medium,
                               LevelPattern pattern = LevelPattern::shell);

    void validate() const;
};

FieldGrid propagate_cluster(const ClusterConfig& cfg, const Axis& x, const Axis& y, const Axis& z,
                            const MediumParams& params, const PropagationOptions& options = {});

/// Scalar coefficients of the cluster Hamiltonian, assembled term by term.
struct ClusterHamiltonianCoeffs {
    struct PhotonTerm {
        int cluster = 1;
        int index = 1;
        double k0_sq_half = 0;  // k0^2 / 2
        double kx_half = 0;     // kx / 2
        double ky_half = 0;     // ky / 2
        double g_half = 0;      // g / 2
    };
    struct Coupling {
        int cluster = 1;
        int index = 1;  // couples x_{i,j} with y_{i,j}
        double strength = 0;
    };

    double kinetic_prefactor = 0;  // 1 / (2 k0)
    std::vector<PhotonTerm> photons;
    double inter_cluster = 0;  // mu * sum kx1 ky1 kx2 ky2
    std::vector<Coupling> intra;

    /// Symmetric matrix of the quadratic potential over (x_11, y_11, x_12, ...),
    /// row-major, size 2P x 2P.
    [[nodiscard]] std::vector<double> quadratic_form() const;
};

ClusterHamiltonianCoeffs cluster_hamiltonian_coeffs(const ClusterConfig& cfg, const MediumParams& params);

enum class ParaxialEquation { free_space, inhomogeneous };

/// RMS of the chosen PDE residual over interior nodes divided by RMS |E|.
///   free_space:    d2/dx2 + d2/dy2 + 2 i k d/dz,   k = 2 pi / lambda
///   inhomogeneous: 2 i k0 d/dz - laplacian_t - k^2(x, y)
double paraxial_residual(const FieldGrid& field, const MediumParams& params, ParaxialEquation equation);

/// Transverse grid rotation g(x, y) = f(x c - y s, x s + y c) for every z
/// slice, via three DFT shears. Exact for band-limited periodic content.
FieldGrid rotate_transverse(const FieldGrid& field, double theta);

}  // namespace qho
