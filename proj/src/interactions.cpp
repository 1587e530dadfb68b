// interactions.cpp — propagator evaluation and coupling-matrix assembly

#include "sr/interactions.hpp"

#include <cmath>
#include <string>

#include "sr/errors.hpp"

namespace sr {

namespace {

constexpr double pi = 3.14159265358979323846;
using cplx = std::complex<double>;

struct GreenScalars {
    cplx p;  // coefficient of the identity part
    cplx q;  // coefficient of the (r x r)/r^2 part
};

GreenScalars green_scalars(double r) {
    const double kr = k0 * r;
    const cplx phase = std::polar(1.0, kr);
    const cplx pref = phase / (4.0 * pi * k0 * k0 * r * r * r);
    const cplx ikr(0.0, kr);
    GreenScalars s;
    s.p = pref * (kr * kr + ikr - 1.0);
    s.q = pref * (-kr * kr - 3.0 * ikr + 3.0);
    return s;
}

}  // namespace

Mat3c green_tensor(const Vec3& r) {
    const double dist = r.norm();
    if (!(dist > 0.0)) {
        throw ValidationError("propagator is singular at zero separation");
    }
    const GreenScalars s = green_scalars(dist);
    const Vec3 rhat = r / dist;
    Mat3c g = s.p * Mat3c::Identity();
    g += s.q * (rhat * rhat.transpose()).cast<cplx>();
    return g;
}

std::complex<double> green_projection(const Vec3& r, const Vec3c& di, const Vec3c& dj) {
    const double dist = r.norm();
    if (!(dist > 0.0)) {
        throw ValidationError("propagator is singular at zero separation");
    }
    const GreenScalars s = green_scalars(dist);
    const Vec3c rhat = (r / dist).cast<cplx>();
    return s.p * di.dot(dj) + s.q * di.dot(rhat) * rhat.dot(dj);
}

InteractionMatrices interaction_matrices(const EmitterArray& array) {
    array.validate(false);
    const int n = array.size();
    InteractionMatrices m;
    m.J = MatXc::Zero(n, n);
    m.Gamma = MatXc::Zero(n, n);

    if (array.point_limit) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m.Gamma(i, j) = std::sqrt(array.gamma0[i] * array.gamma0[j]);
            }
        }
        return m;
    }

    // a_ij = 3*pi*sqrt(g_i g_j)/k0 * d_i^* . G(r_i - r_j) . d_j; the
    // couplings are the Hermitian decomposition J = -(A + A^dag)/2,
    // Gamma = i (A^dag - A), which reduces to -Re / 2 Im for real dipoles.
    MatXc a = MatXc::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const Vec3c di = array.dipoles[i];
        for (int j = i + 1; j < n; ++j) {
            const Vec3 rij = array.positions[i] - array.positions[j];
            const double dist = rij.norm();
            if (!(dist > 0.0)) {
                throw ValidationError("coincident emitters at indices " +
                                      std::to_string(i) + ", " + std::to_string(j));
            }
            const GreenScalars s = green_scalars(dist);
            const Vec3c rhat = (rij / dist).cast<cplx>();
            const Vec3c dj = array.dipoles[j];
            const double scale =
                3.0 * pi * std::sqrt(array.gamma0[i] * array.gamma0[j]) / k0;
            a(i, j) = scale * (s.p * di.dot(dj) + s.q * di.dot(rhat) * rhat.dot(dj));
            // separation flips sign between (i,j) and (j,i); the projector is even
            a(j, i) = scale * (s.p * dj.dot(di) + s.q * dj.dot(rhat) * rhat.dot(di));
        }
    }

    const cplx im(0.0, 1.0);
    m.J = -0.5 * (a + a.adjoint());
    m.Gamma = im * (a.adjoint() - a);
    for (int i = 0; i < n; ++i) {
        m.J(i, i) = 0.0;
        m.Gamma(i, i) = array.gamma0[i];
    }
    return m;
}

}  // namespace sr
