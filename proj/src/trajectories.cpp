// trajectories.cpp — Monte Carlo wavefunction backend: non-Hermitian drift
// restricted to fixed-excitation sectors, waiting-time jump sampling

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pauli.hpp"
#include "sr/channels.hpp"
#include "sr/dynamics.hpp"
#include "sr/errors.hpp"
#include "sr/interactions.hpp"
#include "sr/ode.hpp"
#include "sr/parallel.hpp"
#include "sr/rng.hpp"

namespace sr {

namespace {

using detail::SectorBasis;
using detail::cplx;
using Eigen::VectorXcd;

struct Model {
    int n = 0;
    SectorBasis basis;
    MatXc drift_coupling;          // J [optional] - (i/2)(Gamma_clamped + diag(gamma_nr))
    MatXc radiative_profiles;      // row nu: channel coefficients, clamped rate > 0 only
    VecX radiative_rates;
    std::vector<int> local_atoms;  // atoms with non-radiative decay
    VecX local_rates;

    explicit Model(const EmitterArray& array, bool include_hamiltonian)
        : n(array.size()), basis(array.size()) {
        const InteractionMatrices matrices = interaction_matrices(array);
        const DecayChannels channels = decay_channels(matrices);
        const VecX clamped = channels.clamped_rates();

        MatXc gamma_cl = channels.coefficients.transpose() * clamped.asDiagonal() *
                         channels.coefficients.conjugate();
        gamma_cl = 0.5 * (gamma_cl + gamma_cl.adjoint()).eval();

        drift_coupling = -0.5 * cplx(0.0, 1.0) * gamma_cl;
        for (int i = 0; i < n; ++i) {
            drift_coupling(i, i) += -0.5 * cplx(0.0, 1.0) * array.gamma_nr[i];
            if (array.gamma_nr[i] > 0.0) {
                local_atoms.push_back(i);
            }
        }
        if (include_hamiltonian) drift_coupling += matrices.J;

        local_rates = VecX(local_atoms.size());
        for (std::size_t k = 0; k < local_atoms.size(); ++k) {
            local_rates[static_cast<Eigen::Index>(k)] = array.gamma_nr[local_atoms[k]];
        }

        int n_bright = 0;
        for (int nu = 0; nu < n; ++nu) n_bright += clamped[nu] > 0.0;
        radiative_profiles = MatXc(n_bright, n);
        radiative_rates = VecX(n_bright);
        int row = 0;
        for (int nu = 0; nu < n; ++nu) {
            if (clamped[nu] <= 0.0) continue;
            radiative_profiles.row(row) = channels.coefficients.row(nu);
            radiative_rates[row] = clamped[nu];
            ++row;
        }
    }

    // sum_nu rate_nu |O_nu psi|^2 over the radiative channels (unnormalized)
    double radiative_weight(int n_exc, const VectorXcd& psi, VectorXcd& scratch) const {
        if (n_exc == 0) return 0.0;
        scratch.resize(basis.dim(n_exc - 1));
        double sum = 0.0;
        for (int nu = 0; nu < radiative_rates.size(); ++nu) {
            detail::apply_lowering_in_sector(basis, n_exc,
                                             radiative_profiles.row(nu).transpose(), psi,
                                             scratch);
            sum += radiative_rates[nu] * scratch.squaredNorm();
        }
        return sum;
    }
};

// Drift propagation within one sector with checkpoints for jump-time search.
class SectorFlight {
public:
    SectorFlight(const Model& model, int n_exc, VectorXcd psi, double rtol, double atol)
        : model_(model), n_exc_(n_exc), anchor_(std::move(psi)) {
        ode_.rtol = rtol;
        ode_.atol = atol;
        checkpoints_.push_back({0.0, anchor_});
    }

    // state at local time dt >= 0, advancing from the nearest checkpoint
    const VectorXcd& at(double dt) {
        auto it = std::upper_bound(
            checkpoints_.begin(), checkpoints_.end(), dt,
            [](double value, const Checkpoint& c) { return value < c.time; });
        const Checkpoint& start = *std::prev(it);
        current_ = start.state;
        if (dt > start.time) {
            integrate_adaptive(
                current_, start.time, dt,
                [&](double, const VectorXcd& in, VectorXcd& out) {
                    detail::apply_quadratic_in_sector(model_.basis, n_exc_,
                                                      model_.drift_coupling, in, out);
                    out *= cplx(0.0, -1.0);
                },
                {}, [](std::size_t, double, const VectorXcd&) {}, ode_);
            // keep checkpoints sparse and ordered
            if (dt - start.time > 1e-12) {
                checkpoints_.insert(
                    std::upper_bound(checkpoints_.begin(), checkpoints_.end(), dt,
                                     [](double value, const Checkpoint& c) {
                                         return value < c.time;
                                     }),
                    {dt, current_});
            }
        }
        return current_;
    }

    double norm2_at(double dt) { return at(dt).squaredNorm(); }

private:
    struct Checkpoint {
        double time;
        VectorXcd state;
    };
    const Model& model_;
    int n_exc_;
    VectorXcd anchor_;
    VectorXcd current_;
    std::vector<Checkpoint> checkpoints_;
    OdeOptions ode_;
};

void run_trajectory(const Model& model, const std::vector<double>& grid, double t_end,
                    std::uint64_t seed, double rtol, double atol,
                    std::vector<double>& rate_out, std::vector<double>& excited_out) {
    Rng rng(seed);
    const int n = model.n;
    rate_out.assign(grid.size(), 0.0);
    excited_out.assign(grid.size(), 0.0);

    int n_exc = n;
    VectorXcd psi = VectorXcd::Ones(1);  // fully inverted: single state in the top sector
    double t = 0.0;
    std::size_t grid_idx = 0;
    VectorXcd scratch, lowered;

    const auto record = [&](std::size_t idx, const VectorXcd& state) {
        const double norm2 = state.squaredNorm();
        rate_out[idx] =
            norm2 > 0.0 ? model.radiative_weight(n_exc, state, scratch) / norm2 : 0.0;
        excited_out[idx] = n_exc;
    };

    record(grid_idx++, psi);  // grid[0] == 0

    while (t < t_end && n_exc > 0) {
        SectorFlight flight(model, n_exc, psi, rtol, atol);
        const double u = rng.uniform_pos();
        const double horizon = t_end - t;

        // march with doubling probes until the norm drops below the threshold,
        // then bisect between the last two checkpoints
        double jump_dt = -1.0;
        {
            double lo = 0.0, hi = -1.0;
            double step =
                std::min(horizon, 0.1 / std::max(1.0, model.radiative_rates.sum()));
            double probe = step;
            for (;;) {
                if (flight.norm2_at(probe) < u) {
                    hi = probe;
                    break;
                }
                lo = probe;
                if (probe >= horizon) break;  // no jump before the horizon
                step *= 2.0;
                probe = std::min(horizon, probe + step);
            }
            if (hi > 0.0) {
                for (int iter = 0; iter < 80 && (hi - lo) > 1e-12 * std::max(1.0, hi);
                     ++iter) {
                    const double mid = 0.5 * (lo + hi);
                    if (flight.norm2_at(mid) >= u) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                jump_dt = 0.5 * (lo + hi);
            }
        }

        const double segment_end = jump_dt >= 0.0 ? jump_dt : horizon;
        while (grid_idx < grid.size() && grid[grid_idx] <= t + segment_end + 1e-15) {
            record(grid_idx, flight.at(grid[grid_idx] - t));
            ++grid_idx;
        }

        if (jump_dt < 0.0) {
            t = t_end;
            break;
        }

        // select the decay channel at the jump instant
        const VectorXcd& pre = flight.at(jump_dt);
        const int n_rad = static_cast<int>(model.radiative_rates.size());
        const int n_loc = static_cast<int>(model.local_atoms.size());
        std::vector<double> weights(n_rad + n_loc, 0.0);
        double total = 0.0;
        scratch.resize(model.basis.dim(n_exc - 1));
        for (int nu = 0; nu < n_rad; ++nu) {
            detail::apply_lowering_in_sector(model.basis, n_exc,
                                             model.radiative_profiles.row(nu).transpose(),
                                             pre, scratch);
            weights[nu] = model.radiative_rates[nu] * scratch.squaredNorm();
            total += weights[nu];
        }
        for (int k = 0; k < n_loc; ++k) {
            const int atom = model.local_atoms[k];
            double w = 0.0;
            const auto& sector = model.basis.masks[n_exc];
            for (std::size_t s = 0; s < sector.size(); ++s) {
                if (sector[s] & (1u << atom)) w += std::norm(pre[s]);
            }
            weights[n_rad + k] = model.local_rates[k] * w;
            total += weights[n_rad + k];
        }
        if (!(total > 0.0)) {
            throw NumericalError("no decay channel available at a sampled jump");
        }
        const double draw = rng.uniform() * total;
        double cumulative = 0.0;
        int chosen = static_cast<int>(weights.size()) - 1;
        for (std::size_t c = 0; c < weights.size(); ++c) {
            cumulative += weights[c];
            if (draw < cumulative || cumulative == total) {  // ties: lowest index
                chosen = static_cast<int>(c);
                break;
            }
        }

        lowered.resize(model.basis.dim(n_exc - 1));
        if (chosen < n_rad) {
            detail::apply_lowering_in_sector(model.basis, n_exc,
                                             model.radiative_profiles.row(chosen).transpose(),
                                             pre, lowered);
        } else {
            const int atom = model.local_atoms[chosen - n_rad];
            VectorXcd alpha = VectorXcd::Zero(n);
            alpha[atom] = 1.0;
            detail::apply_lowering_in_sector(model.basis, n_exc, alpha, pre, lowered);
        }
        const double norm = lowered.norm();
        if (!(norm > 0.0)) {
            throw NumericalError("jump produced a null state");
        }
        psi = lowered / norm;
        --n_exc;
        t += jump_dt;
    }

    while (grid_idx < grid.size()) rate_out[grid_idx++] = 0.0;
}

}  // namespace

EmissionTrace evolve_trajectories(const EmitterArray& array, const DynamicsOptions& opts) {
    const int n = array.size();
    if (n > 16) {
        throw CapacityError("trajectory backend supports up to 16 emitters, got " +
                            std::to_string(n));
    }
    if (opts.n_traj < 1) throw ValidationError("need at least one trajectory");
    if (!(opts.t_end > 0.0)) throw ValidationError("t_end must be > 0");

    const Model model(array, opts.include_hamiltonian);
    const std::vector<double> grid = emission_time_grid(array.total_gamma0(), opts.t_end);

    std::vector<std::vector<double>> per_traj(opts.n_traj);
    std::vector<std::vector<double>> per_traj_excited(opts.n_traj);
    parallel_for(
        static_cast<std::size_t>(opts.n_traj),
        [&](std::size_t i) {
            run_trajectory(model, grid, opts.t_end, child_seed(opts.seed, i), opts.rtol,
                           opts.atol, per_traj[i], per_traj_excited[i]);
        },
        opts.threads);

    EmissionTrace trace;
    trace.backend = "trajectories";
    trace.trajectories = opts.n_traj;
    trace.times = grid;
    trace.rate.assign(grid.size(), 0.0);
    trace.std_error.assign(grid.size(), 0.0);
    trace.excited_population.assign(grid.size(), 0.0);

    // reduction in trajectory order keeps results independent of scheduling
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double sum = 0.0, excited = 0.0;
        for (int i = 0; i < opts.n_traj; ++i) {
            sum += per_traj[i][g];
            excited += per_traj_excited[i][g];
        }
        const double mean = sum / opts.n_traj;
        double sq = 0.0;
        for (int i = 0; i < opts.n_traj; ++i) {
            const double delta = per_traj[i][g] - mean;
            sq += delta * delta;
        }
        trace.rate[g] = mean;
        trace.excited_population[g] = excited / opts.n_traj;
        trace.std_error[g] =
            opts.n_traj > 1 ? std::sqrt(sq / (static_cast<double>(opts.n_traj) *
                                              (opts.n_traj - 1)))
                            : 0.0;
    }

    const BurstInfo info = detect_burst(trace);
    trace.t_max = info.t_max;
    trace.peak_ratio = info.peak_ratio;
    return trace;
}

}  // namespace sr
