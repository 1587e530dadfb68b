// channels.cpp — eigendecomposition of the dissipative matrix and trace moments

#include "sr/channels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sr/errors.hpp"

namespace sr {

namespace {

double clamp_tolerance(int n, double mean_rate) {
    return 1e-10 * n * mean_rate;
}

}  // namespace

VecX DecayChannels::clamped_rates() const {
    const int n = size();
    const double mean = rates.sum() / n;
    const double tol = clamp_tolerance(n, mean);
    VecX out = rates;
    for (int i = 0; i < n; ++i) {
        if (out[i] < 0.0) {
            if (out[i] < -tol) {
                throw NumericalError(
                    "dissipative matrix has a negative decay rate beyond tolerance: " +
                    std::to_string(out[i]));
            }
            out[i] = 0.0;
        }
    }
    return out;
}

VecX DecayChannels::emitter_rates() const {
    const int n = size();
    VecX out = VecX::Zero(n);
    for (int i = 0; i < n; ++i) {
        for (int nu = 0; nu < n; ++nu) {
            out[i] += rates[nu] * std::norm(coefficients(nu, i));
        }
    }
    return out;
}

DecayChannels decay_channels(const InteractionMatrices& m) {
    const int n = m.size();
    Eigen::SelfAdjointEigenSolver<MatXc> solver(m.Gamma);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the dissipative matrix failed (N = " +
                             std::to_string(n) + ", |Gamma|_max = " +
                             std::to_string(m.Gamma.cwiseAbs().maxCoeff()) + ")");
    }
    DecayChannels ch;
    ch.rates = VecX(n);
    ch.coefficients = MatXc(n, n);
    // ascending from the solver; store descending
    for (int nu = 0; nu < n; ++nu) {
        ch.rates[nu] = solver.eigenvalues()[n - 1 - nu];
        ch.coefficients.row(nu) = solver.eigenvectors().col(n - 1 - nu).transpose();
    }
    return ch;
}

bool RateMoments::has_m3() const { return !std::isnan(m3); }

RateMoments rate_moments(const InteractionMatrices& m, bool with_third) {
    RateMoments r;
    r.n = m.size();
    r.m1 = m.Gamma.trace().real();
    r.m2 = m.Gamma.squaredNorm();
    if (with_third) {
        const MatXc g2 = m.Gamma * m.Gamma;
        r.m3 = g2.cwiseProduct(m.Gamma.transpose()).sum().real();
    } else {
        r.m3 = std::numeric_limits<double>::quiet_NaN();
    }
    const double mean = r.m1 / r.n;
    r.variance = r.m2 / (r.n * mean * mean) - 1.0;
    return r;
}

RateMoments rate_moments(const VecX& rates) {
    RateMoments r;
    r.n = static_cast<int>(rates.size());
    r.m1 = rates.sum();
    r.m2 = rates.squaredNorm();
    r.m3 = rates.array().cube().sum();
    const double mean = r.m1 / r.n;
    r.variance = r.m2 / (r.n * mean * mean) - 1.0;
    return r;
}

double decay_rate_variance(const InteractionMatrices& m) {
    const int n = m.size();
    const double m1 = m.Gamma.trace().real();
    const double m2 = m.Gamma.squaredNorm();
    const double mean = m1 / n;
    return m2 / (n * mean * mean) - 1.0;
}

}  // namespace sr
