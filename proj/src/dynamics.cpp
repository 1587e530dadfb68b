// dynamics.cpp — Liouville backend, emission grid, burst detection
//
// The master equation conserves or lowers the excitation number and the run
// starts from the fully inverted product state, so the density matrix stays
// block-diagonal over excitation sectors for the whole evolution. The
// backend therefore stores one dense block per sector (sum_n C(N,n)^2
// amplitudes instead of 4^N) and applies the generator block by block.

#include "sr/dynamics.hpp"

#include <cmath>
#include <string>

#include "pauli.hpp"
#include "sr/channels.hpp"
#include "sr/errors.hpp"
#include "sr/interactions.hpp"
#include "sr/ode.hpp"

namespace sr {

namespace {

using detail::SectorBasis;
using detail::cplx;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct BlockLayout {
    std::vector<int> offset;  // start of each sector block in the flat state
    std::vector<int> dim;
    int total = 0;

    explicit BlockLayout(const SectorBasis& basis) {
        const int n = basis.n_atoms;
        offset.resize(n + 1);
        dim.resize(n + 1);
        for (int s = 0; s <= n; ++s) {
            offset[s] = total;
            dim[s] = basis.dim(s);
            total += dim[s] * dim[s];
        }
    }

    Eigen::Map<MatrixXcd> block(VectorXcd& state, int s) const {
        return {state.data() + offset[s], dim[s], dim[s]};
    }
    Eigen::Map<const MatrixXcd> block(const VectorXcd& state, int s) const {
        return {state.data() + offset[s], dim[s], dim[s]};
    }
};

}  // namespace

std::vector<double> emission_time_grid(double total_rate, double t_end) {
    if (!(total_rate > 0.0)) throw ValidationError("total rate must be > 0");
    if (!(t_end > 0.0)) throw ValidationError("t_end must be > 0");
    const double dt0 = 1e-3 / total_rate;
    std::vector<double> grid;
    grid.push_back(0.0);
    for (int k = 1; k <= 10 && k * dt0 < t_end; ++k) grid.push_back(k * dt0);
    double t = grid.back();
    double dt = dt0;
    while (t < t_end) {
        dt = std::min(dt * 1.2, t_end / 25.0);
        t += dt;
        grid.push_back(std::min(t, t_end));
    }
    grid.back() = t_end;
    return grid;
}

EmissionTrace evolve_liouville(const EmitterArray& array, const DynamicsOptions& opts) {
    const int n = array.size();
    if (n > 10) {
        throw CapacityError("Liouville backend supports up to 10 emitters, got " +
                            std::to_string(n));
    }
    if (!(opts.t_end > 0.0)) throw ValidationError("t_end must be > 0");

    const InteractionMatrices matrices = interaction_matrices(array);
    const DecayChannels channels = decay_channels(matrices);
    const VecX clamped = channels.clamped_rates();

    // dissipative quadratic coefficient matrix from the clamped channels
    MatXc gamma_cl = channels.coefficients.transpose() * clamped.asDiagonal() *
                     channels.coefficients.conjugate();
    gamma_cl = 0.5 * (gamma_cl + gamma_cl.adjoint()).eval();

    MatXc drift_coupling = -0.5 * cplx(0.0, 1.0) * gamma_cl;
    for (int i = 0; i < n; ++i) {
        drift_coupling(i, i) += -0.5 * cplx(0.0, 1.0) * array.gamma_nr[i];
    }
    if (opts.include_hamiltonian) drift_coupling += matrices.J;

    struct JumpChannel {
        VectorXcd alpha;
        double rate;
    };
    std::vector<JumpChannel> jumps;
    for (int nu = 0; nu < n; ++nu) {
        if (clamped[nu] <= 0.0) continue;
        jumps.push_back({channels.coefficients.row(nu).transpose(), clamped[nu]});
    }
    for (int i = 0; i < n; ++i) {
        if (array.gamma_nr[i] > 0.0) {
            VectorXcd alpha = VectorXcd::Zero(n);
            alpha[i] = 1.0;
            jumps.push_back({std::move(alpha), array.gamma_nr[i]});
        }
    }

    const SectorBasis basis(n);
    const BlockLayout layout(basis);
    const int max_dim = basis.dim(n / 2);

    VectorXcd state = VectorXcd::Zero(layout.total);
    layout.block(state, n)(0, 0) = 1.0;  // all emitters excited

    MatrixXcd left(max_dim, max_dim), lowered(max_dim, max_dim),
        sandwich(max_dim, max_dim);

    const auto derivative = [&](double, const VectorXcd& in, VectorXcd& out) {
        out.setZero();
        for (int s = 0; s <= n; ++s) {
            const int d = layout.dim[s];
            const auto rho = layout.block(in, s);
            auto drho = layout.block(out, s);
            if (s > 0) {
                // drift: blocks are Hermitian, so rho Heff^dag = (Heff rho)^dag
                auto hrho = left.topLeftCorner(d, d);
                for (int col = 0; col < d; ++col) {
                    detail::apply_quadratic_in_sector(basis, s, drift_coupling,
                                                      rho.col(col), hrho.col(col));
                }
                drho.noalias() = cplx(0.0, -1.0) * hrho;
                drho.noalias() += (cplx(0.0, -1.0) * hrho).adjoint();
            }
            if (s == n) continue;
            // feeding from the sector above through every jump channel
            const int up = s + 1;
            const int dup = layout.dim[up];
            const auto rho_up = layout.block(in, up);
            for (const JumpChannel& jump : jumps) {
                auto a = lowered.topLeftCorner(d, dup);  // O rho_up
                for (int col = 0; col < dup; ++col) {
                    detail::apply_lowering_in_sector(basis, up, jump.alpha,
                                                     rho_up.col(col), a.col(col));
                }
                // (O rho_up) O^dag via column updates over the lowering map
                auto b = sandwich.topLeftCorner(d, d);
                b.setZero();
                const auto& masks = basis.masks[up];
                for (int src = 0; src < dup; ++src) {
                    const std::uint32_t mask = masks[src];
                    for (int i = 0; i < n; ++i) {
                        if (!(mask & (1u << i))) continue;
                        const cplx weight = std::conj(jump.alpha[i]);
                        if (weight == cplx(0.0, 0.0)) continue;
                        b.col(basis.rank[mask & ~(1u << i)]) += weight * a.col(src);
                    }
                }
                drho.noalias() += jump.rate * b;
            }
        }
    };

    // photon rate: sum over radiative channels of rate * tr(O^dag O rho)
    VectorXcd scratch(max_dim);
    const auto emission_rate = [&](const VectorXcd& in) {
        double total = 0.0;
        for (int s = 1; s <= n; ++s) {
            const int d = layout.dim[s];
            const auto rho = layout.block(in, s);
            for (int col = 0; col < d; ++col) {
                detail::apply_quadratic_in_sector(basis, s, gamma_cl, rho.col(col),
                                                  scratch.head(d));
                total += scratch[col].real();
            }
        }
        return total;
    };

    const std::vector<double> grid = emission_time_grid(array.total_gamma0(), opts.t_end);
    EmissionTrace trace;
    trace.backend = "liouville";
    trace.times = grid;
    trace.rate.assign(grid.size(), 0.0);
    trace.excited_population.assign(grid.size(), 0.0);

    double max_drift = 0.0;
    OdeOptions ode;
    ode.rtol = opts.rtol;
    ode.atol = opts.atol;
    const OdeStats stats = integrate_adaptive(
        state, 0.0, opts.t_end, derivative, grid,
        [&](std::size_t idx, double, const VectorXcd& in) {
            trace.rate[idx] = emission_rate(in);
            cplx tr = 0.0;
            double excited = 0.0;
            for (int s = 0; s <= n; ++s) {
                const cplx block_trace = layout.block(in, s).trace();
                tr += block_trace;
                excited += s * block_trace.real();
            }
            trace.excited_population[idx] = excited;
            max_drift = std::max(max_drift, std::abs(tr - cplx(1.0, 0.0)));
        },
        ode);
    trace.integrator_steps = stats.accepted;

    if (max_drift > 1e-6) {
        throw NumericalError("density-matrix trace drifted by " + std::to_string(max_drift) +
                             " after " + std::to_string(stats.accepted) + " accepted / " +
                             std::to_string(stats.rejected) + " rejected steps");
    }

    const BurstInfo info = detect_burst(trace);
    trace.t_max = info.t_max;
    trace.peak_ratio = info.peak_ratio;
    return trace;
}

BurstInfo detect_burst(const EmissionTrace& trace) {
    if (trace.times.size() < 3 || trace.rate.size() != trace.times.size()) {
        throw ValidationError("emission trace is too short for burst detection");
    }
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < trace.rate.size(); ++i) {
        if (!std::isfinite(trace.rate[i])) {
            throw NumericalError("emission trace contains a non-finite value at t = " +
                                 std::to_string(trace.times[i]));
        }
        if (trace.rate[i] > trace.rate[argmax]) argmax = i;
    }
    BurstInfo info;
    info.t_max = trace.times[argmax];
    info.peak_ratio = trace.rate[argmax] / trace.rate[0];
    info.burst = info.t_max > trace.times[2];  // two grid steps past zero
    return info;
}

}  // namespace sr
