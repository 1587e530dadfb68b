// interactions.hpp — free-space dyadic propagator and the coherent /
// dissipative coupling matrices between emitters

#pragma once

#include <Eigen/Dense>

#include <complex>

#include "sr/geometry.hpp"

namespace sr {

using Mat3c = Eigen::Matrix3cd;
using MatXc = Eigen::MatrixXcd;

// Free-space electromagnetic propagator evaluated at separation r (units of
// the wavelength), including the 1/r, 1/r^2 and 1/r^3 terms. Throws on r = 0.
Mat3c green_tensor(const Vec3& r);

// Scalar projection d_i^* . G(r) . d_j without materializing the 3x3 tensor.
std::complex<double> green_projection(const Vec3& r, const Vec3c& di, const Vec3c& dj);

struct InteractionMatrices {
    // Hermitian N x N matrices. J carries the coherent couplings with a zero
    // diagonal (the single-emitter shift is absorbed into the transition
    // frequency); Gamma carries the dissipative couplings with diagonal
    // equal to the per-emitter radiative rates. Both are real symmetric for
    // real dipole orientations.
    MatXc J;
    MatXc Gamma;

    int size() const { return static_cast<int>(Gamma.rows()); }
};

// Assembles J and Gamma from emitter positions, dipoles and rates. The
// overall scale is fixed by the coincidence limit Gamma_ii = gamma0_i; for
// unequal radiative rates the off-diagonals scale with sqrt(gamma0_i *
// gamma0_j). Arrays flagged as the point limit yield Gamma_ij =
// sqrt(gamma0_i gamma0_j) and J = 0 directly.
InteractionMatrices interaction_matrices(const EmitterArray& array);

}  // namespace sr
