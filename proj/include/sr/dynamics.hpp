// dynamics.hpp — exact small-N open-system evolution of the fully inverted
// array: deterministic density-matrix integration and Monte Carlo
// wavefunction trajectories, with burst detection on the emission rate.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sr/geometry.hpp"

namespace sr {

struct DynamicsOptions {
    bool include_hamiltonian = true;
    double t_end = 3.0;        // units of inverse single-emitter rate
    int n_traj = 1000;         // trajectory backend only
    std::uint64_t seed = 0;    // trajectory backend only
    unsigned threads = 0;      // trajectory backend; 0 = hardware concurrency
    double rtol = 1e-8;
    double atol = 1e-10;
};

struct EmissionTrace {
    std::vector<double> times;      // refined near t = 0
    std::vector<double> rate;       // total photon emission rate
    std::vector<double> std_error;  // per-point standard error; empty for Liouville
    std::vector<double> excited_population;  // total excited population

    double t_max = 0.0;
    double peak_ratio = 1.0;  // rate(t_max) / rate(0)

    std::string backend;
    int trajectories = 0;
    std::size_t integrator_steps = 0;
};

struct BurstInfo {
    double t_max = 0.0;
    double peak_ratio = 1.0;
    bool burst = false;
};

// Output time grid shared by both backends: a linear stretch of width
// 1e-3 / (total rate) next to t = 0, then geometric growth to t_end.
std::vector<double> emission_time_grid(double total_rate, double t_end);

// Integrates the master equation for the density matrix over the 2^N product
// basis with the collective jump channels (clamped rates) and optional local
// non-radiative decay. Excitation number never increases from the fully
// inverted start, so the state is held as one dense block per excitation
// sector. Capacity limit N <= 10. Throws NumericalError on trace drift.
EmissionTrace evolve_liouville(const EmitterArray& array, const DynamicsOptions& opts);

// Monte Carlo wavefunction unraveling: non-Hermitian drift within fixed
// excitation sectors plus waiting-time-sampled jumps. Deterministic per
// (options.seed); trajectories are independent work items. N <= 16.
EmissionTrace evolve_trajectories(const EmitterArray& array, const DynamicsOptions& opts);

// Locates the rate maximum; a burst is a maximum later than two grid steps.
// Throws on non-finite trace values.
BurstInfo detect_burst(const EmissionTrace& trace);

}  // namespace sr
