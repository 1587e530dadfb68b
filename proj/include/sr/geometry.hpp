// geometry.hpp — emitter array construction: lattices, stochastic filling,
// positional disorder. Lengths are in units of the transition wavelength,
// rates in units of the single-emitter radiative rate.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace sr {

using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;

constexpr double k0 = 2.0 * 3.14159265358979323846;  // wavenumber, 2*pi / wavelength

struct EmitterArray {
    std::vector<Vec3> positions;
    std::vector<Vec3c> dipoles;    // unit dipole orientation per emitter
    std::vector<double> gamma0;    // radiative rate per emitter
    std::vector<double> gamma_nr;  // non-radiative rate per emitter

    // Lattice constant the array was built with, when one is defined.
    std::optional<double> spacing;

    // All emitters at a single point; interaction assembly bypasses the
    // (divergent) propagator and yields the all-ones dissipative matrix.
    bool point_limit = false;

    int size() const { return static_cast<int>(positions.size()); }
    double total_gamma0() const;

    // Throws ValidationError on broken invariants (non-unit dipoles,
    // coincident emitters outside the point limit, non-positive rates).
    // The O(N^2) coincidence check can be skipped by callers whose own
    // pair loop already guards against zero separation.
    void validate(bool check_pairs = true) const;
};

enum class LatticeKind { chain, ring, square, cubic };

struct Polarization {
    enum class Mode { fixed, tangential } mode = Mode::fixed;
    Vec3c axis = Vec3c(0.0, 0.0, 1.0);

    static Polarization along(const Vec3c& axis);
    static Polarization x() { return along(Vec3c(1, 0, 0)); }
    static Polarization y() { return along(Vec3c(0, 1, 0)); }
    static Polarization z() { return along(Vec3c(0, 0, 1)); }
    static Polarization tangential() {
        Polarization p;
        p.mode = Mode::tangential;
        return p;
    }
};

struct LatticeSpec {
    LatticeKind kind = LatticeKind::chain;
    int nx = 1, ny = 1, nz = 1;  // site counts per axis (chain and ring use nx)
    double spacing = 1.0;        // nearest-neighbour distance
    Polarization polarization = Polarization::z();

    int site_count() const;
};

// Chain along x, ring in the x-y plane (nearest-neighbour chord equal to the
// spacing), axis-aligned square and cubic lattices. Tangential polarization
// is only meaningful for rings and assigns each emitter the unit tangent.
EmitterArray build_lattice(const LatticeSpec& spec);

// N emitters at a single point with the given radiative rate.
EmitterArray dicke_point(int n, double gamma0 = 1.0);

// Keeps each site independently with probability eta. Throws when fewer
// than 2 emitters survive. Deterministic under a fixed seed.
EmitterArray apply_filling(const EmitterArray& array, double eta, std::uint64_t seed);

// Adds independent Gaussian noise of standard deviation sigma_rel * spacing
// to every coordinate. The array must carry a defined lattice spacing.
EmitterArray apply_position_noise(const EmitterArray& array, double sigma_rel, std::uint64_t seed);

}  // namespace sr
