// statistics.cpp — closed-form photon correlation functions

#include "sr/statistics.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "sr/errors.hpp"

namespace sr {

namespace {

using cplx = std::complex<double>;

void require_emitters(int n, int minimum, const char* what) {
    if (n < minimum) {
        throw ValidationError(std::string(what) + " needs at least " +
                              std::to_string(minimum) + " emitters, got " +
                              std::to_string(n));
    }
}

}  // namespace

double g2_zero(const RateMoments& moments) {
    require_emitters(moments.n, 2, "g2");
    return 1.0 + (moments.variance - 1.0) / moments.n;
}

double g3_zero(const RateMoments& moments) {
    require_emitters(moments.n, 3, "g3");
    if (!moments.has_m3()) {
        throw ValidationError("g3 needs the cubic spectral moment");
    }
    const double n = moments.n;
    const double s2 = moments.m2 / (moments.m1 * moments.m1);
    const double s3 = moments.m3 / (moments.m1 * moments.m1 * moments.m1);
    return 1.0 + 2.0 * s3 + (3.0 - 12.0 / n) * s2 + 12.0 / (n * n) - 6.0 / n;
}

PhotonStatistics photon_statistics(const RateMoments& moments) {
    PhotonStatistics stats;
    stats.variance = moments.variance;
    stats.g2 = g2_zero(moments);
    stats.g3 = (moments.n >= 3 && moments.has_m3()) ? g3_zero(moments)
                                                    : std::numeric_limits<double>::quiet_NaN();
    stats.burst_predicted = stats.g2 > 1.0;
    return stats;
}

std::vector<double> g2_tau_ratio(const DecayChannels& channels, const MatXc& coherent,
                                 const std::vector<double>& tau_grid) {
    const int n = channels.size();
    if (coherent.rows() != n || coherent.cols() != n) {
        throw ValidationError("coherent matrix size does not match channel count");
    }
    for (double tau : tau_grid) {
        if (tau < 0.0) throw ValidationError("delay times must be >= 0");
    }

    // hole-hopping generator: element (j, m) = J_mj
    const MatXc generator = coherent.transpose();
    if ((generator - generator.adjoint()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, generator.cwiseAbs().maxCoeff())) {
        throw NumericalError("restricted one-hole generator is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<MatXc> solver(generator);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the one-hole generator failed");
    }
    const MatXc& u = solver.eigenvectors();
    const VecX& eps = solver.eigenvalues();

    // Gamma reassembled from the channels, and the per-emitter rates for the
    // on-site term of sum_mu rate_mu |O_mu h|^2.
    MatXc gamma = MatXc::Zero(n, n);
    for (int nu = 0; nu < n; ++nu) {
        gamma += channels.rates[nu] * channels.coefficients.row(nu).transpose() *
                 channels.coefficients.row(nu).conjugate();
    }
    const VecX emitter = channels.emitter_rates();
    const double total = channels.rates.sum();

    // initial hole vectors: channel nu starts as its own coefficient profile
    const MatXc holes0 = channels.coefficients.transpose();  // column nu = h_nu(0)
    const MatXc holes_eig = u.adjoint() * holes0;

    std::vector<double> ratio;
    ratio.reserve(tau_grid.size());
    double denom = 0.0;
    bool have_denom = false;
    for (double tau : tau_grid) {
        VecXc phase(n);
        for (int k = 0; k < n; ++k) phase[k] = std::polar(1.0, -eps[k] * tau);
        const MatXc holes = u * phase.asDiagonal() * holes_eig;

        double numer = 0.0;
        for (int nu = 0; nu < n; ++nu) {
            const VecXc h = holes.col(nu);
            const double quad = (h.adjoint() * gamma * h)(0).real();
            double onsite = 0.0;
            for (int i = 0; i < n; ++i) onsite += emitter[i] * std::norm(h[i]);
            numer += channels.rates[nu] * (total * h.squaredNorm() + quad - 2.0 * onsite);
        }
        if (!have_denom) {
            // tau_grid need not start at zero; evaluate the tau = 0 reference once
            double n0 = 0.0;
            for (int nu = 0; nu < n; ++nu) {
                const VecXc h = holes0.col(nu);
                const double quad = (h.adjoint() * gamma * h)(0).real();
                double onsite = 0.0;
                for (int i = 0; i < n; ++i) onsite += emitter[i] * std::norm(h[i]);
                n0 += channels.rates[nu] * (total * h.squaredNorm() + quad - 2.0 * onsite);
            }
            denom = n0;
            have_denom = true;
        }
        ratio.push_back(numer / denom);
    }
    return ratio;
}

void HoleState::validate() const {
    if (imperfection() > 1.0 + 1e-12) {
        throw ValidationError("hole amplitudes exceed unit total weight");
    }
}

HoleState coherent_spin_state_hole(double phi, const Vec3& k, const EmitterArray& array) {
    if (!(phi > 0.0) || phi > 1.0) {
        throw ValidationError("excitation probability must lie in (0, 1]");
    }
    const int n = array.size();
    HoleState hole;
    hole.zeta = VecXc::Zero(n);
    if (phi == 1.0) return hole;
    // truncated state: sqrt(phi^N) |all excited> + sum_a zeta_a |hole at a>,
    // normalized over the two retained excitation sectors
    const double w = (1.0 - phi) / (phi + n * (1.0 - phi));
    const double amp = std::sqrt(w);
    for (int a = 0; a < n; ++a) {
        hole.zeta[a] = std::polar(amp, -k.dot(array.positions[a]));
    }
    return hole;
}

double g2_imperfect(const DecayChannels& channels, const HoleState& hole) {
    const int n = channels.size();
    require_emitters(n, 2, "g2");
    if (hole.zeta.size() != n) {
        throw ValidationError("hole state dimension does not match channel count");
    }
    hole.validate();

    const VecX& rates = channels.rates;
    const MatXc& coeff = channels.coefficients;
    const double mean = rates.sum() / n;  // homogeneous radiative rate assumed
    const double m2 = rates.squaredNorm();
    const double weight = hole.zeta.squaredNorm();

    // overlaps s_nu = sum_i conj(coeff_nu,i) zeta_i
    const VecXc s = coeff.conjugate() * hole.zeta;

    double hole_diag = 0.0;  // sum_a |zeta_a|^2 (Gamma^2)_aa
    for (int a = 0; a < n; ++a) {
        double g2aa = 0.0;
        for (int nu = 0; nu < n; ++nu) g2aa += rates[nu] * rates[nu] * std::norm(coeff(nu, a));
        hole_diag += std::norm(hole.zeta[a]) * g2aa;
    }
    double cross1 = 0.0;  // zeta^dag Gamma zeta
    double cross2 = 0.0;  // zeta^dag Gamma^2 zeta
    for (int nu = 0; nu < n; ++nu) {
        cross1 += rates[nu] * std::norm(s[nu]);
        cross2 += rates[nu] * rates[nu] * std::norm(s[nu]);
    }

    const double numer = (static_cast<double>(n) * n - 2.0 * n) * mean * mean + m2 -
                         4.0 * (weight * (n - 3.0) * mean * mean + hole_diag) +
                         (2.0 * n - 8.0) * mean * cross1 + 2.0 * cross2;
    const double denom_root = (n - 2.0 * weight) * mean + cross1;
    return numer / (denom_root * denom_root);
}

double g2_inhomogeneous(const RateMoments& moments, const std::vector<double>& gamma0) {
    const int n = moments.n;
    require_emitters(n, 2, "g2");
    if (static_cast<int>(gamma0.size()) != n) {
        throw ValidationError("gamma0 length does not match emitter count");
    }
    const double mean = moments.m1 / n;
    double sq = 0.0;
    for (double g : gamma0) sq += (g / mean) * (g / mean);
    const double var_emitters = sq / n - 1.0;
    return g2_zero(moments) - 2.0 * var_emitters / n;
}

G2NonRadiative g2_nonradiative(const DecayChannels& channels,
                               const std::vector<double>& gamma_nr) {
    const int n = channels.size();
    require_emitters(n, 2, "g2");
    if (static_cast<int>(gamma_nr.size()) != n) {
        throw ValidationError("gamma_nr length does not match emitter count");
    }
    for (double g : gamma_nr) {
        if (g < 0.0) throw ValidationError("gamma_nr entries must be >= 0");
    }

    const VecX& rates = channels.rates;
    const VecX emitter = channels.emitter_rates();
    const double mean = rates.sum() / n;
    const double mean_nr = [&] {
        double s = 0.0;
        for (double g : gamma_nr) s += g;
        return s / n;
    }();
    const double m2 = rates.squaredNorm();
    const double emitter_sq = emitter.squaredNorm();

    G2NonRadiative out;
    out.extrapolated = *std::max_element(gamma_nr.begin(), gamma_nr.end()) > mean;

    // event probabilities, one non-radiative event at most
    const double r1 = n * mean + n * mean_nr;        // total rate before photon 1
    const double r2 = n * mean + 2.0 * n * mean_nr;  // before photon 2
    const double p01 = n * mean / r1;
    const double p02 = n * mean / r2;

    const double fully = n * (double)n * mean * mean + m2 - 2.0 * emitter_sq;

    double hole_terms = 0.0;  // sum_i p_i(1,2) * B_i
    for (int i = 0; i < n; ++i) {
        double dressed = 0.0;  // sum_nu rate_nu^2 (1 - 2 |coeff_nu,i|^2)
        for (int nu = 0; nu < n; ++nu) {
            dressed += rates[nu] * rates[nu] * (1.0 - 2.0 * std::norm(channels.coefficients(nu, i)));
        }
        const double b = n * (double)n * mean * mean + dressed -
                         2.0 * n * emitter[i] * mean + 4.0 * emitter[i] * emitter[i] -
                         2.0 * emitter_sq;
        hole_terms += (gamma_nr[i] / r2) * b;
    }

    double denom_hole = 0.0;  // (N-1) sum_i p_i(1,1) rate_i
    for (int i = 0; i < n; ++i) denom_hole += (gamma_nr[i] / r1) * emitter[i];
    denom_hole *= (n - 1.0);

    const double numer = p02 * fully + 2.0 * hole_terms;
    const double denom_root = p01 * n * mean + denom_hole;
    out.g2 = numer / (denom_root * denom_root);
    return out;
}

}  // namespace sr
