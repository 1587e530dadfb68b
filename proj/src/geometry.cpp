// geometry.cpp — lattice builders and stochastic array edits

#include "sr/geometry.hpp"

#include <cmath>
#include <string>

#include "sr/errors.hpp"
#include "sr/rng.hpp"

namespace sr {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_counts(const LatticeSpec& spec) {
    if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1) {
        throw ValidationError("lattice counts must be >= 1");
    }
    if (spec.spacing <= 0.0) {
        throw ValidationError("lattice spacing must be > 0");
    }
    if (spec.polarization.mode == Polarization::Mode::tangential &&
        spec.kind != LatticeKind::ring) {
        throw ValidationError("tangential polarization is only defined for rings");
    }
}

}  // namespace

Polarization Polarization::along(const Vec3c& axis) {
    const double n = std::sqrt(axis.squaredNorm());
    if (n <= 0.0) throw ValidationError("polarization axis must be a nonzero vector");
    Polarization p;
    p.axis = axis / n;
    return p;
}

int LatticeSpec::site_count() const {
    switch (kind) {
        case LatticeKind::chain:
        case LatticeKind::ring:
            return nx;
        case LatticeKind::square:
            return nx * ny;
        case LatticeKind::cubic:
            return nx * ny * nz;
    }
    return 0;
}

double EmitterArray::total_gamma0() const {
    double sum = 0.0;
    for (double g : gamma0) sum += g;
    return sum;
}

void EmitterArray::validate(bool check_pairs) const {
    const std::size_t n = positions.size();
    if (dipoles.size() != n || gamma0.size() != n || gamma_nr.size() != n) {
        throw ValidationError("emitter array field lengths disagree");
    }
    if (n == 0) throw ValidationError("emitter array is empty");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(dipoles[i].squaredNorm() - 1.0) > 1e-12) {
            throw ValidationError("dipole " + std::to_string(i) + " is not unit norm");
        }
        if (!(gamma0[i] > 0.0)) {
            throw ValidationError("gamma0 entries must be > 0");
        }
        if (gamma_nr[i] < 0.0) {
            throw ValidationError("gamma_nr entries must be >= 0");
        }
    }
    if (check_pairs && !point_limit) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if ((positions[i] - positions[j]).norm() <= 0.0) {
                    throw ValidationError("coincident emitters at indices " +
                                          std::to_string(i) + ", " + std::to_string(j));
                }
            }
        }
    }
}

EmitterArray build_lattice(const LatticeSpec& spec) {
    check_counts(spec);
    const double d = spec.spacing;
    EmitterArray array;
    array.spacing = d;

    switch (spec.kind) {
        case LatticeKind::chain:
            for (int i = 0; i < spec.nx; ++i) {
                array.positions.emplace_back(i * d, 0.0, 0.0);
            }
            break;
        case LatticeKind::ring: {
            const int n = spec.nx;
            if (n == 1) {
                array.positions.emplace_back(0.0, 0.0, 0.0);
                break;
            }
            // nearest-neighbour chord equals the spacing
            const double radius = d / (2.0 * std::sin(pi / n));
            for (int i = 0; i < n; ++i) {
                const double theta = 2.0 * pi * i / n;
                array.positions.emplace_back(radius * std::cos(theta),
                                             radius * std::sin(theta), 0.0);
            }
            break;
        }
        case LatticeKind::square:
            for (int iy = 0; iy < spec.ny; ++iy) {
                for (int ix = 0; ix < spec.nx; ++ix) {
                    array.positions.emplace_back(ix * d, iy * d, 0.0);
                }
            }
            break;
        case LatticeKind::cubic:
            for (int iz = 0; iz < spec.nz; ++iz) {
                for (int iy = 0; iy < spec.ny; ++iy) {
                    for (int ix = 0; ix < spec.nx; ++ix) {
                        array.positions.emplace_back(ix * d, iy * d, iz * d);
                    }
                }
            }
            break;
    }

    const int n = array.size();
    array.dipoles.reserve(n);
    if (spec.polarization.mode == Polarization::Mode::tangential) {
        for (int i = 0; i < n; ++i) {
            const double theta = 2.0 * pi * i / n;
            array.dipoles.emplace_back(-std::sin(theta), std::cos(theta), 0.0);
        }
    } else {
        for (int i = 0; i < n; ++i) array.dipoles.push_back(spec.polarization.axis);
    }
    array.gamma0.assign(n, 1.0);
    array.gamma_nr.assign(n, 0.0);
    array.validate();
    return array;
}

EmitterArray dicke_point(int n, double gamma0) {
    if (n < 1) throw ValidationError("dicke_point needs at least one emitter");
    if (!(gamma0 > 0.0)) throw ValidationError("gamma0 must be > 0");
    EmitterArray array;
    array.positions.assign(n, Vec3::Zero());
    array.dipoles.assign(n, Vec3c(0.0, 0.0, 1.0));
    array.gamma0.assign(n, gamma0);
    array.gamma_nr.assign(n, 0.0);
    array.point_limit = true;
    return array;
}

EmitterArray apply_filling(const EmitterArray& array, double eta, std::uint64_t seed) {
    if (!(eta > 0.0) || eta > 1.0) {
        throw ValidationError("filling fraction must lie in (0, 1]");
    }
    Rng rng(seed);
    EmitterArray out;
    out.spacing = array.spacing;
    out.point_limit = array.point_limit;
    for (int i = 0; i < array.size(); ++i) {
        if (rng.uniform() < eta) {
            out.positions.push_back(array.positions[i]);
            out.dipoles.push_back(array.dipoles[i]);
            out.gamma0.push_back(array.gamma0[i]);
            out.gamma_nr.push_back(array.gamma_nr[i]);
        }
    }
    if (out.size() < 2) {
        throw ValidationError("fewer than 2 emitters survived filling");
    }
    return out;
}

EmitterArray apply_position_noise(const EmitterArray& array, double sigma_rel,
                                  std::uint64_t seed) {
    if (sigma_rel < 0.0) throw ValidationError("sigma_rel must be >= 0");
    if (!array.spacing) {
        throw ValidationError("position noise needs an array with a defined spacing");
    }
    EmitterArray out = array;
    if (sigma_rel == 0.0) return out;
    const double sigma = sigma_rel * *array.spacing;
    Rng rng(seed);
    for (auto& r : out.positions) {
        r.x() += sigma * rng.normal();
        r.y() += sigma * rng.normal();
        r.z() += sigma * rng.normal();
    }
    return out;
}

}  // namespace sr
