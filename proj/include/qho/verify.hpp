#pragma once

#include <string>
#include <vector>

#include "qho/field_model.hpp"

namespace qho {

/// max |int phi_m phi_n - delta_mn| over m, n <= max_n, by Gauss-Hermite quadrature.
double orthonormality_error(int max_n, int nodes = 64);

/// Finite-difference residual on a base grid and on one refinement (all
/// spacings halved), with the measured order log2(coarse / fine).
struct ResidualStudy {
    double coarse = 0;
    double fine = 0;
    double order = 0;
};

/// TEM_lm in free space with Rayleigh range `rayleigh_range`, checked against
/// the free-space paraxial equation around z = rayleigh_range / 2.
ResidualStudy tem_residual_study(int l, int m, double rayleigh_range, double wavelength);

/// Single-channel field of level (level, level) in `params`, checked against
/// the inhomogeneous paraxial equation.
ResidualStudy medium_residual_study(int level, const MediumParams& params,
                                    RotationSign rotation = RotationSign::forward,
                                    ZeroPoint zero_point = ZeroPoint::consistent);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Residual, orthonormality and reduction checks used by `qho selftest`.
std::vector<CheckResult> run_selftest();

}  // namespace qho
