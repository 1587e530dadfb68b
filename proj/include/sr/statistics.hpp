// statistics.hpp — exact few-photon correlation functions of the fully
// inverted state and their imperfection-corrected variants

#pragma once

#include <vector>

#include "sr/channels.hpp"
#include "sr/geometry.hpp"

namespace sr {

struct PhotonStatistics {
    double g2 = 0.0;
    double g3 = 0.0;
    double variance = 0.0;
    bool burst_predicted = false;  // g2 > 1, equivalently variance > 1
};

// Two-photon correlation at zero delay, g2 = 1 + (Var - 1)/N. Exact; no
// eigenvectors needed. Throws for N < 2.
double g2_zero(const RateMoments& moments);

// Three-photon correlation at zero delay from the second and third spectral
// moments. Throws for N < 3 or when the moments skip the cubic term.
double g3_zero(const RateMoments& moments);

// Bundles g2, g3 (when available) and the variance criterion.
PhotonStatistics photon_statistics(const RateMoments& moments);

// Ratio g2(tau)/g2(0) with purely Hamiltonian evolution between the first
// two emissions, evaluated in the one-hole subspace: the generator is the
// coherent coupling matrix restricted to hole hopping (element between
// hole-at-m and hole-at-j equal to J_mj); the uniform transition-frequency
// phase drops out of the ratio. One N x N Hermitian exponential per tau.
std::vector<double> g2_tau_ratio(const DecayChannels& channels, const MatXc& coherent,
                                 const std::vector<double>& tau_grid);

// Amplitudes of the one-hole component of an imperfectly prepared state.
struct HoleState {
    VecXc zeta;

    double imperfection() const { return zeta.squaredNorm(); }  // sum |zeta_a|^2
    void validate() const;                                      // requires imperfection <= 1
};

// One-hole truncation of the coherent spin state produced by a short drive
// with excitation probability phi and wavevector k: zeta_a proportional to
// exp(-i k . r_a), jointly normalized with the fully excited amplitude.
HoleState coherent_spin_state_hole(double phi, const Vec3& k, const EmitterArray& array);

// g2(0) on the fully excited state superposed with one-hole amplitudes.
// Needs channel coefficients; reduces to g2_zero for zeta = 0.
double g2_imperfect(const DecayChannels& channels, const HoleState& hole);

// g2(0) for per-emitter radiative rates under the flat-spectrum assumption:
// the homogeneous result minus (2/N) Var(rate_i / mean rate).
double g2_inhomogeneous(const RateMoments& moments, const std::vector<double>& gamma0);

struct G2NonRadiative {
    double g2 = 0.0;
    // Set when max gamma_nr exceeds the mean radiative rate; the underlying
    // single-event truncation is extrapolated beyond its derivation regime.
    bool extrapolated = false;
};

// g2(0) with local non-radiative decay at per-emitter rates gamma_nr,
// keeping at most one non-radiative event per two-photon emission.
G2NonRadiative g2_nonradiative(const DecayChannels& channels,
                               const std::vector<double>& gamma_nr);

}  // namespace sr
