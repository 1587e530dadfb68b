// channels.hpp — collective decay channels of the dissipative coupling
// matrix and spectral moments of their rates

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "sr/interactions.hpp"

namespace sr {

using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;

struct DecayChannels {
    // Eigenvalues of Gamma in descending order.
    VecX rates;
    // Channel coefficients; row nu holds the spatial profile of channel nu,
    // so coefficients(nu, i) weights the lowering operator of emitter i.
    // Within a degenerate rate block the basis is an arbitrary orthonormal
    // choice; downstream formulas only use block-invariant combinations.
    MatXc coefficients;

    int size() const { return static_cast<int>(rates.size()); }

    // Rates with small negatives (floating-point noise near dark channels)
    // clamped to zero; suitable as jump rates. Negatives beyond
    // -1e-10 * N * mean_rate indicate a broken dissipator and throw.
    VecX clamped_rates() const;

    // Per-emitter radiative rate recovered from the completeness relation
    // sum_nu rate_nu |coeff_nu,i|^2.
    VecX emitter_rates() const;
};

// Full Hermitian eigendecomposition of Gamma. Throws NumericalError when the
// solver fails.
DecayChannels decay_channels(const InteractionMatrices& m);

struct RateMoments {
    int n = 0;
    double m1 = 0.0;  // sum of rates (= sum of emitter rates)
    double m2 = 0.0;  // sum of squared rates
    double m3 = 0.0;  // sum of cubed rates; NaN when skipped
    // Var({rate_nu} / mean_emitter_rate)
    double variance = 0.0;

    bool has_m3() const;
};

// Spectral moments without diagonalization: m2 as the squared Frobenius norm
// of Gamma, m3 as trace(Gamma^3). The cubic moment costs a matrix product
// and can be skipped for scan hot paths that only need the variance.
RateMoments rate_moments(const InteractionMatrices& m, bool with_third = true);

// Same moments from an explicit rate list (eigenvalue route).
RateMoments rate_moments(const VecX& rates);

// Var({rate_nu}/mean) straight from Gamma; the scans' O(N^2) fast path.
double decay_rate_variance(const InteractionMatrices& m);

}  // namespace sr
