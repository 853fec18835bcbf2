#include "qho/field_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "qho/errors.hpp"

namespace qho {

namespace {

constexpr double kPi = std::numbers::pi;

void check_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive and finite");
}

void check_quadratic_form(double kx, double ky, double g) {
    if (!(kx > 0) || !(ky > 0) || !std::isfinite(kx) || !std::isfinite(ky) || !std::isfinite(g)) {
        throw DefinitenessError("medium curvatures kx, ky must be positive and finite");
    }
    if (kx * ky <= g * g) {
        throw DefinitenessError("medium quadratic form is not positive definite: kx*ky = " +
                                std::to_string(kx * ky) + " <= g^2 = " + std::to_string(g * g));
    }
}

}  // namespace

MediumParams MediumParams::create(double wavelength, double n0, double kx, double ky, double g) {
    check_positive(wavelength, "wavelength");
    if (!(n0 >= 1.0) || !std::isfinite(n0)) throw ParameterError("refractive index n0 must be >= 1");
    check_quadratic_form(kx, ky, g);
    MediumParams p;
    p.wavelength_ = wavelength;
    p.n0_ = n0;
    p.k0_ = 2.0 * kPi * n0 / wavelength;
    p.kx_ = kx;
    p.ky_ = ky;
    p.g_ = g;
    return p;
}

MediumParams MediumParams::from_scaled(double wavelength, double n0, double kx, double ky, double g,
                                       double length_unit) {
    check_positive(length_unit, "length unit");
    const double s = 1.0 / std::pow(length_unit, 4);
    return create(wavelength, n0, kx * s, ky * s, g * s);
}

MediumParams MediumParams::with_curvature(double kx, double ky) const {
    return create(wavelength_, n0_, kx, ky, g_);
}

double MediumParams::potential(double x, double y) const {
    return kx_ * x * x + ky_ * y * y - 2.0 * g_ * x * y;
}

NormalModes rotation_angle(double kx, double ky, double g) {
    check_quadratic_form(kx, ky, g);
    NormalModes m;
    m.theta = 0.5 * std::atan2(2.0 * g, kx - ky);
    const double mean = 0.5 * (kx + ky);
    const double radius = std::hypot(0.5 * (kx - ky), g);
    m.kappa_plus = mean + radius;
    // kx ky - g^2 = kappa_plus kappa_minus avoids cancellation in mean - radius.
    m.kappa_minus = (kx * ky - g * g) / m.kappa_plus;
    m.omega_x = std::sqrt(m.kappa_plus);
    m.omega_y = std::sqrt(m.kappa_minus);
    return m;
}

NormalModes rotation_angle(const MediumParams& params) {
    return rotation_angle(params.kx(), params.ky(), params.g());
}

BeamGeometry beam_geometry(double z, double rayleigh_range, double wavelength) {
    check_positive(rayleigh_range, "Rayleigh range");
    check_positive(wavelength, "wavelength");
    if (!std::isfinite(z)) throw DomainError("z must be finite");
    BeamGeometry b;
    b.rayleigh_range = rayleigh_range;
    b.waist = std::sqrt(wavelength * rayleigh_range / kPi);
    const double q = z / rayleigh_range;
    b.radius = b.waist * std::sqrt(1.0 + q * q);
    // 1/R = z / (z^2 + b^2), finite at the waist.
    b.curvature = z / (z * z + rayleigh_range * rayleigh_range);
    b.gouy = std::atan(q);
    return b;
}

Complex tem_mode(OscillatorIndex l, OscillatorIndex m, double x, double y, double z, double rayleigh_range,
                 double wavelength) {
    const BeamGeometry geom = beam_geometry(z, rayleigh_range, wavelength);
    const double k = 2.0 * kPi / wavelength;
    const double amp = geom.waist / geom.radius * ho_wavefunction(l, std::numbers::sqrt2 * x / geom.radius) *
                       ho_wavefunction(m, std::numbers::sqrt2 * y / geom.radius);
    const double phase = 0.5 * k * geom.curvature * (x * x + y * y) - (l + m + 1) * geom.gouy;
    return std::polar(amp, phase);
}

std::vector<double> Axis::values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = (*this)[i];
    return v;
}

Axis Axis::centered(double half_width, std::size_t count) {
    if (count < 2) return Axis{0.0, std::max(half_width, 1.0), count};
    return Axis{-half_width, 2.0 * half_width / static_cast<double>(count - 1), count};
}

FieldGrid::FieldGrid(Axis x, Axis y, Axis z) : x_(x), y_(y), z_(z) {
    for (const Axis* a : {&x_, &y_, &z_}) {
        if (a->count == 0) throw GridError("grid axis must have at least one sample");
        if (!(a->step > 0) || !std::isfinite(a->step) || !std::isfinite(a->start)) {
            throw GridError("grid axis spacing must be strictly positive and finite");
        }
    }
    data_.assign(x_.count * y_.count * z_.count, Complex{});
}

void FieldGrid::check_finite() const {
    for (const Complex& c : data_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw GridError("field grid holds a non-finite sample");
    }
}

FieldGrid& FieldGrid::operator+=(const FieldGrid& other) {
    if (other.data_.size() != data_.size() || other.x_.count != x_.count || other.y_.count != y_.count) {
        throw GridError("cannot add field grids of different shape");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

double FieldGrid::transverse_norm2(std::size_t iz) const {
    double total = 0.0;
    for (std::size_t iy = 0; iy < y_.count; ++iy) {
        const double wy = (iy == 0 || iy + 1 == y_.count) ? 0.5 : 1.0;
        for (std::size_t ix = 0; ix < x_.count; ++ix) {
            const double wx = (ix == 0 || ix + 1 == x_.count) ? 0.5 : 1.0;
            total += wx * wy * std::norm(at(ix, iy, iz));
        }
    }
    return total * x_.step * y_.step;
}

VectorField electric_field_paraxial(const FieldGrid& psi, const MediumParams& params, double omega) {
    const std::size_t nx = psi.x().count;
    if (nx < 3) throw GridError("paraxial field needs at least 3 x-samples");
    constexpr double c = 299792458.0;
    const double h = psi.x().step;
    const double k = params.k0();
    VectorField out{FieldGrid(psi.x(), psi.y(), psi.z()), FieldGrid(psi.x(), psi.y(), psi.z())};
    for (std::size_t iz = 0; iz < psi.z().count; ++iz) {
        const Complex carrier = std::polar(1.0, k * psi.z()[iz]);
        for (std::size_t iy = 0; iy < psi.y().count; ++iy) {
            for (std::size_t ix = 0; ix < nx; ++ix) {
                Complex d;
                if (ix == 0) {
                    d = (-3.0 * psi.at(0, iy, iz) + 4.0 * psi.at(1, iy, iz) - psi.at(2, iy, iz)) / (2.0 * h);
                } else if (ix + 1 == nx) {
                    d = (3.0 * psi.at(nx - 1, iy, iz) - 4.0 * psi.at(nx - 2, iy, iz) + psi.at(nx - 3, iy, iz)) /
                        (2.0 * h);
                } else {
                    d = (psi.at(ix + 1, iy, iz) - psi.at(ix - 1, iy, iz)) / (2.0 * h);
                }
                out.ex.at(ix, iy, iz) = omega * psi.at(ix, iy, iz) * carrier;
                out.ez.at(ix, iy, iz) = Complex(0.0, c) * d * carrier;
            }
        }
    }
    return out;
}

double propagation_constant(OscillatorIndex ex, OscillatorIndex ey, const MediumParams& params,
                            ZeroPoint zero_point) {
    const NormalModes m = rotation_angle(params);
    const double k0 = params.k0();
    const double zero = (m.omega_x + m.omega_y) / (zero_point == ZeroPoint::consistent ? 2.0 * k0 : k0);
    return -0.5 * k0 + zero + (ex * m.omega_x + ey * m.omega_y) / k0;
}

double transverse_mode(OscillatorIndex ex, OscillatorIndex ey, const NormalModes& modes, double x, double y,
                       RotationSign rotation) {
    const double th = rotation == RotationSign::forward ? modes.theta : -modes.theta;
    const double c = std::cos(th);
    const double s = std::sin(th);
    const double u = x * c - y * s;
    const double v = x * s + y * c;
    const double norm = std::sqrt(std::sqrt(modes.omega_x * modes.omega_y));
    return norm * ho_wavefunction(ex, std::sqrt(modes.omega_x) * u) *
           ho_wavefunction(ey, std::sqrt(modes.omega_y) * v);
}

namespace {

/// Adds amplitude * transverse(x, y) * exp(i beta z) into `grid`, slabs of z in parallel.
void accumulate_mode(FieldGrid& grid, const std::vector<double>& transverse, double beta, unsigned workers) {
    const std::size_t nz = grid.z().count;
    const std::size_t plane = grid.x().count * grid.y().count;
    auto run = [&](std::size_t z_begin, std::size_t z_end) {
        for (std::size_t iz = z_begin; iz < z_end; ++iz) {
            const Complex phase = std::polar(1.0, beta * grid.z()[iz]);
            Complex* slice = grid.data().data() + iz * plane;
            for (std::size_t p = 0; p < plane; ++p) slice[p] += transverse[p] * phase;
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(nz)));
    if (n == 1) {
        run(0, nz);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back(run, nz * w / n, nz * (w + 1) / n);
    }
}

std::vector<double> transverse_plane(OscillatorIndex ex, OscillatorIndex ey, const NormalModes& modes,
                                     const Axis& x, const Axis& y, RotationSign rotation) {
    std::vector<double> plane(x.count * y.count);
    for (std::size_t iy = 0; iy < y.count; ++iy) {
        for (std::size_t ix = 0; ix < x.count; ++ix) {
            plane[iy * x.count + ix] = transverse_mode(ex, ey, modes, x[ix], y[iy], rotation);
        }
    }
    return plane;
}

}  // namespace

FieldGrid propagate_single(OscillatorIndex ex, OscillatorIndex ey, const Axis& x, const Axis& y, const Axis& z,
                           const MediumParams& params, const PropagationOptions& options) {
    FieldGrid grid(x, y, z);
    const NormalModes modes = rotation_angle(params);
    const double beta = propagation_constant(ex, ey, params, options.zero_point);
    accumulate_mode(grid, transverse_plane(ex, ey, modes, x, y, options.rotation), beta, options.workers);
    return grid;
}

ClusterConfig ClusterConfig::build(int n1, int n2, int level, const MediumParams& medium, LevelPattern pattern) {
    ClusterConfig cfg;
    cfg.n1 = n1;
    cfg.n2 = n2;
    if (n1 < 1 || n2 < 1) throw ParameterError("cluster photon counts must be >= 1");
    if (level < 0) throw ParameterError("energy level must be >= 0");
    for (int i = 1; i <= 2; ++i) {
        const int count = i == 1 ? n1 : n2;
        const int sign = i == 1 ? 1 : -1;
        for (int j = 1; j <= count; ++j) {
            int s = 0;
            if (pattern == LevelPattern::shell && level > 0) {
                // 0, +1, -1, +2, -2, ... cycling within |s| <= level.
                const int k = (j - 1) % (2 * level + 1);
                s = (k + 1) / 2 * (k % 2 == 1 ? 1 : -1);
            }
            cfg.photons.push_back(Photon{i, j, OscillatorIndex(level + sign * s), OscillatorIndex(level - sign * s),
                                         medium.kx(), medium.ky()});
        }
    }
    return cfg;
}

void ClusterConfig::validate() const {
    if (n1 < 1 || n2 < 1) throw ParameterError("cluster photon counts must be >= 1");
    if (!std::isfinite(mu) || !std::isfinite(sigma1) || !std::isfinite(sigma2)) {
        throw ParameterError("entanglement strengths must be finite");
    }
    std::vector<int> seen1(static_cast<std::size_t>(n1) + 1, 0), seen2(static_cast<std::size_t>(n2) + 1, 0);
    for (const Photon& p : photons) {
        const std::string tag = "photon (" + std::to_string(p.cluster) + ", " + std::to_string(p.index) + ")";
        if (p.cluster != 1 && p.cluster != 2) throw ParameterError(tag + ": cluster must be 1 or 2");
        auto& seen = p.cluster == 1 ? seen1 : seen2;
        if (p.index < 1 || p.index >= static_cast<int>(seen.size())) {
            throw ParameterError(tag + ": index outside the cluster size");
        }
        if (seen[p.index]++) throw ParameterError(tag + ": duplicated");
    }
    for (int j = 1; j <= n1; ++j) {
        if (!seen1[j]) throw ParameterError("photon (1, " + std::to_string(j) + ") missing");
    }
    for (int j = 1; j <= n2; ++j) {
        if (!seen2[j]) throw ParameterError("photon (2, " + std::to_string(j) + ") missing");
    }
}

FieldGrid propagate_cluster(const ClusterConfig& cfg, const Axis& x, const Axis& y, const Axis& z,
                            const MediumParams& params, const PropagationOptions& options) {
    cfg.validate();
    FieldGrid grid(x, y, z);
    for (const Photon& p : cfg.photons) {
        MediumParams local = params;
        try {
            local = params.with_curvature(p.kx, p.ky);
        } catch (const InvariantError& e) {
            throw ParameterError("photon (" + std::to_string(p.cluster) + ", " + std::to_string(p.index) +
                                 "): " + e.what());
        }
        const NormalModes modes = rotation_angle(local);
        const double beta = propagation_constant(p.ex, p.ey, local, options.zero_point);
        accumulate_mode(grid, transverse_plane(p.ex, p.ey, modes, x, y, options.rotation), beta, options.workers);
    }
    return grid;
}

std::vector<double> ClusterHamiltonianCoeffs::quadratic_form() const {
    const std::size_t n = 2 * photons.size();
    std::vector<double> q(n * n, 0.0);
    for (std::size_t p = 0; p < photons.size(); ++p) {
        const std::size_t ix = 2 * p, iy = 2 * p + 1;
        q[ix * n + ix] = photons[p].kx_half;
        q[iy * n + iy] = photons[p].ky_half;
        // g x y contributes g/2 to each of the two symmetric off-diagonal slots.
        q[ix * n + iy] += 0.5 * photons[p].g_half;
        q[iy * n + ix] += 0.5 * photons[p].g_half;
    }
    for (const Coupling& c : intra) {
        for (std::size_t p = 0; p < photons.size(); ++p) {
            if (photons[p].cluster == c.cluster && photons[p].index == c.index) {
                const std::size_t ix = 2 * p, iy = 2 * p + 1;
                q[ix * n + iy] += 0.5 * c.strength;
                q[iy * n + ix] += 0.5 * c.strength;
            }
        }
    }
    return q;
}

ClusterHamiltonianCoeffs cluster_hamiltonian_coeffs(const ClusterConfig& cfg, const MediumParams& params) {
    cfg.validate();
    ClusterHamiltonianCoeffs out;
    const double k0 = params.k0();
    out.kinetic_prefactor = 1.0 / (2.0 * k0);
    double sum1 = 0.0, sum2 = 0.0;
    for (const Photon& p : cfg.photons) {
        out.photons.push_back({p.cluster, p.index, 0.5 * k0 * k0, 0.5 * p.kx, 0.5 * p.ky, 0.5 * params.g()});
        (p.cluster == 1 ? sum1 : sum2) += p.kx * p.ky;
        const double s = p.cluster == 1 ? cfg.sigma1 : cfg.sigma2;
        if (s != 0.0) out.intra.push_back({p.cluster, p.index, s});
    }
    // The double sum over (j1, j2) factorizes.
    out.inter_cluster = cfg.mu * sum1 * sum2;
    return out;
}

double paraxial_residual(const FieldGrid& field, const MediumParams& params, ParaxialEquation equation) {
    const Axis& ax = field.x();
    const Axis& ay = field.y();
    const Axis& az = field.z();
    if (ax.count < 5 || ay.count < 5 || az.count < 5) throw GridError("residual check needs >= 5 samples per axis");
    const double hx2 = ax.step * ax.step, hy2 = ay.step * ay.step, hz = az.step;
    const bool free = equation == ParaxialEquation::free_space;
    const double k = free ? 2.0 * kPi / params.wavelength() : params.k0();
    const Complex two_ik(0.0, 2.0 * k);
    double res2 = 0.0, field2 = 0.0;
    std::size_t count = 0;
    for (std::size_t iz = 1; iz + 1 < az.count; ++iz) {
        for (std::size_t iy = 1; iy + 1 < ay.count; ++iy) {
            for (std::size_t ix = 1; ix + 1 < ax.count; ++ix) {
                const Complex e = field.at(ix, iy, iz);
                const Complex lap = (field.at(ix + 1, iy, iz) - 2.0 * e + field.at(ix - 1, iy, iz)) / hx2 +
                                    (field.at(ix, iy + 1, iz) - 2.0 * e + field.at(ix, iy - 1, iz)) / hy2;
                const Complex dz = (field.at(ix, iy, iz + 1) - field.at(ix, iy, iz - 1)) / (2.0 * hz);
                Complex r;
                if (free) {
                    r = lap + two_ik * dz;
                } else {
                    const double k2 = k * k - params.potential(ax[ix], ay[iy]);
                    r = two_ik * dz - lap - k2 * e;
                }
                res2 += std::norm(r);
                field2 += std::norm(e);
                ++count;
            }
        }
    }
    if (field2 == 0.0) return res2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(res2 / field2);
}

namespace {

/// out[n] = sum_k F[k] exp(2 pi i k (n + shift) / N): band-limited shift of a
/// complex sequence by `shift` samples toward lower indices.
void dft_shift(std::vector<Complex>& seq, double shift) {
    const std::size_t n = seq.size();
    if (n < 2 || shift == 0.0) return;
    std::vector<Complex> twiddle(n);
    for (std::size_t m = 0; m < n; ++m) twiddle[m] = std::polar(1.0, -2.0 * kPi * double(m) / double(n));
    std::vector<Complex> spec(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j) acc += seq[j] * twiddle[(k * j) % n];
        // Signed frequency in [-N/2, N/2).
        const double f = k < (n + 1) / 2 ? double(k) : double(k) - double(n);
        spec[k] = acc / double(n) * std::polar(1.0, 2.0 * kPi * f * shift / double(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc{};
        for (std::size_t k = 0; k < n; ++k) acc += spec[k] * std::conj(twiddle[(k * j) % n]);
        seq[j] = acc;
    }
}

/// f(x, y) -> f(x + a y, y) on every row.
void shear_x(FieldGrid& g, std::size_t iz, double a) {
    std::vector<Complex> row(g.x().count);
    for (std::size_t iy = 0; iy < g.y().count; ++iy) {
        for (std::size_t ix = 0; ix < row.size(); ++ix) row[ix] = g.at(ix, iy, iz);
        dft_shift(row, a * g.y()[iy] / g.x().step);
        for (std::size_t ix = 0; ix < row.size(); ++ix) g.at(ix, iy, iz) = row[ix];
    }
}

/// f(x, y) -> f(x, y + b x) on every column.
void shear_y(FieldGrid& g, std::size_t iz, double b) {
    std::vector<Complex> col(g.y().count);
    for (std::size_t ix = 0; ix < g.x().count; ++ix) {
        for (std::size_t iy = 0; iy < col.size(); ++iy) col[iy] = g.at(ix, iy, iz);
        dft_shift(col, b * g.x()[ix] / g.y().step);
        for (std::size_t iy = 0; iy < col.size(); ++iy) g.at(ix, iy, iz) = col[iy];
    }
}

}  // namespace

FieldGrid rotate_transverse(const FieldGrid& field, double theta) {
    // [[c, -s], [s, c]] = Sx(-t) Sy(s) Sx(-t), t = tan(theta / 2); the leftmost
    // factor acts first on the sampled function.
    FieldGrid out = field;
    const double t = std::tan(0.5 * theta);
    const double s = std::sin(theta);
    for (std::size_t iz = 0; iz < out.z().count; ++iz) {
        shear_x(out, iz, -t);
        shear_y(out, iz, s);
        shear_x(out, iz, -t);
    }
    return out;
}

}  // namespace qho
