#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sr/channels.hpp"
#include "sr/dynamics.hpp"
#include "sr/errors.hpp"
#include "sr/statistics.hpp"

using namespace sr;

namespace {

EmitterArray square_array(int side, double spacing) {
    LatticeSpec spec;
    spec.kind = LatticeKind::square;
    spec.nx = spec.ny = side;
    spec.spacing = spacing;
    return build_lattice(spec);
}

EmitterArray single_emitter() {
    EmitterArray array;
    array.positions = {Vec3(0, 0, 0)};
    array.dipoles = {Vec3c(0, 0, 1)};
    array.gamma0 = {1.0};
    array.gamma_nr = {0.0};
    return array;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        sum += 0.5 * (y[i] + y[i + 1]) * (t[i + 1] - t[i]);
    }
    return sum;
}

}  // namespace

TEST_CASE("emission grid starts fine and ends at t_end") {
    const std::vector<double> grid = emission_time_grid(9.0, 3.0);
    REQUIRE(grid.size() > 20);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 3.0);
    CHECK(grid[1] == doctest::Approx(1e-3 / 9.0));
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) CHECK(grid[i] < grid[i + 1]);
}

TEST_CASE("single emitter decays exponentially") {
    DynamicsOptions opts;
    opts.t_end = 5.0;
    const EmissionTrace trace = evolve_liouville(single_emitter(), opts);
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        CHECK(trace.rate[i] == doctest::Approx(std::exp(-trace.times[i])).epsilon(1e-6));
    }
    const BurstInfo burst = detect_burst(trace);
    CHECK(burst.t_max == 0.0);
    CHECK(!burst.burst);
    CHECK(burst.peak_ratio == doctest::Approx(1.0));
}

TEST_CASE("two emitters at a point follow the closed-form cascade") {
    DynamicsOptions opts;
    opts.t_end = 4.0;
    const EmissionTrace trace = evolve_liouville(dicke_point(2), opts);
    CHECK(trace.rate[0] == doctest::Approx(2.0).epsilon(1e-9));
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        CHECK(trace.rate[i] ==
              doctest::Approx(oracle::two_emitter_point_rate(trace.times[i])).epsilon(1e-6));
    }
    CHECK(!detect_burst(trace).burst);  // the pair sits exactly on the threshold
}

TEST_CASE("point-limit array of six emitters bursts") {
    DynamicsOptions opts;
    opts.t_end = 2.0;
    const EmissionTrace trace = evolve_liouville(dicke_point(6), opts);
    const BurstInfo burst = detect_burst(trace);
    CHECK(burst.burst);
    CHECK(burst.t_max > 0.0);
    CHECK(burst.peak_ratio > 1.0);
}

TEST_CASE("initial rate equals the summed emitter rates") {
    EmitterArray array = square_array(3, 0.2);
    for (int i = 0; i < array.size(); ++i) array.gamma0[i] = 0.6 + 0.1 * i;
    DynamicsOptions opts;
    opts.t_end = 0.5;
    const EmissionTrace trace = evolve_liouville(array, opts);
    CHECK(trace.rate[0] ==
          doctest::Approx(array.total_gamma0()).epsilon(1e-6));
}

TEST_CASE("photon balance and excitation monotonicity at small N") {
    LatticeSpec spec;
    spec.kind = LatticeKind::chain;
    spec.nx = 3;
    spec.spacing = 0.15;
    const EmitterArray array = build_lattice(spec);
    DynamicsOptions opts;
    opts.t_end = 20.0;
    const EmissionTrace trace = evolve_liouville(array, opts);

    CHECK(trapezoid(trace.times, trace.rate) == doctest::Approx(3.0).epsilon(0.02));
    REQUIRE(trace.excited_population.size() == trace.times.size());
    CHECK(trace.excited_population[0] == doctest::Approx(3.0).epsilon(1e-9));
    for (std::size_t i = 0; i + 1 < trace.rate.size(); ++i) {
        CHECK(trace.rate[i] >= 0.0);
        CHECK(trace.excited_population[i + 1] <= trace.excited_population[i] + 1e-9);
    }
}

TEST_CASE("just above the critical spacing there is no burst and no prediction") {
    const EmitterArray sparse = square_array(3, 0.3);  // d_critical sits near 0.27
    DynamicsOptions opts;
    opts.t_end = 3.0;
    const EmissionTrace trace = evolve_liouville(sparse, opts);
    CHECK(!detect_burst(trace).burst);
    CHECK(g2_zero(rate_moments(interaction_matrices(sparse))) < 1.0);
}

TEST_CASE("burst appears together with the statistics criterion at 3x3") {
    const EmitterArray dense = square_array(3, 0.1);
    DynamicsOptions opts;
    opts.t_end = 2.0;
    const EmissionTrace trace = evolve_liouville(dense, opts);
    CHECK(detect_burst(trace).burst);
    CHECK(g2_zero(rate_moments(interaction_matrices(dense))) > 1.0);
}

TEST_CASE("capacity limits") {
    LatticeSpec spec;
    spec.kind = LatticeKind::chain;
    spec.nx = 11;
    spec.spacing = 0.2;
    DynamicsOptions opts;
    CHECK_THROWS_AS(evolve_liouville(build_lattice(spec), opts), CapacityError);
    spec.nx = 17;
    CHECK_THROWS_AS(evolve_trajectories(build_lattice(spec), opts), CapacityError);
    opts.n_traj = 0;
    spec.nx = 4;
    CHECK_THROWS_AS(evolve_trajectories(build_lattice(spec), opts), ValidationError);
}

TEST_CASE("detect_burst validates its input") {
    EmissionTrace trace;
    trace.times = {0.0, 0.1, 0.2, 0.3};
    trace.rate = {1.0, 0.9, std::nan(""), 0.7};
    CHECK_THROWS_AS(detect_burst(trace), NumericalError);
    trace.rate = {1.0, 0.9};
    CHECK_THROWS_AS(detect_burst(trace), ValidationError);
}

TEST_CASE("single-emitter trajectories match the exponential law") {
    DynamicsOptions opts;
    opts.t_end = 3.0;
    opts.n_traj = 10000;
    opts.seed = 31;
    const EmissionTrace trace = evolve_trajectories(single_emitter(), opts);
    REQUIRE(trace.std_error.size() == trace.times.size());
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const double expected = std::exp(-trace.times[i]);
        const double tolerance = 3.0 * trace.std_error[i] + 1e-9;
        CHECK(std::abs(trace.rate[i] - expected) <= tolerance);
    }
}

TEST_CASE("trajectories agree with the Liouville backend") {
    LatticeSpec spec;
    spec.kind = LatticeKind::chain;
    spec.nx = 5;
    spec.spacing = 0.12;
    const EmitterArray array = build_lattice(spec);

    DynamicsOptions opts;
    opts.t_end = 1.5;
    const EmissionTrace exact = evolve_liouville(array, opts);

    opts.n_traj = 3000;
    opts.seed = 77;
    const EmissionTrace sampled = evolve_trajectories(array, opts);

    REQUIRE(exact.times.size() == sampled.times.size());
    int outliers = 0;
    for (std::size_t i = 0; i < exact.times.size(); ++i) {
        const double tolerance = 3.0 * sampled.std_error[i] + 1e-6;
        if (std::abs(exact.rate[i] - sampled.rate[i]) > tolerance) ++outliers;
    }
    // a few 3-sigma excursions over ~70 grid points are statistically expected
    CHECK(outliers <= 3);
}

TEST_CASE("seven-emitter ring trajectories agree with the Liouville backend") {
    LatticeSpec spec;
    spec.kind = LatticeKind::ring;
    spec.nx = 7;
    spec.spacing = 0.2;
    spec.polarization = Polarization::tangential();
    const EmitterArray array = build_lattice(spec);

    DynamicsOptions opts;
    opts.t_end = 1.0;
    const EmissionTrace exact = evolve_liouville(array, opts);

    opts.n_traj = 2000;
    opts.seed = 99;
    const EmissionTrace sampled = evolve_trajectories(array, opts);

    int outliers = 0;
    for (std::size_t i = 0; i < exact.times.size(); ++i) {
        if (std::abs(exact.rate[i] - sampled.rate[i]) > 3.0 * sampled.std_error[i] + 1e-6) {
            ++outliers;
        }
    }
    CHECK(outliers <= 3);
}

TEST_CASE("trajectories are deterministic per seed") {
    const EmitterArray array = dicke_point(3);
    DynamicsOptions opts;
    opts.t_end = 1.0;
    opts.n_traj = 50;
    opts.seed = 5;
    const EmissionTrace a = evolve_trajectories(array, opts);
    const EmissionTrace b = evolve_trajectories(array, opts);
    for (std::size_t i = 0; i < a.rate.size(); ++i) {
        CHECK(a.rate[i] == b.rate[i]);  // bitwise
    }
}

TEST_CASE("non-radiative decay accelerates the loss of excitation") {
    EmitterArray array = square_array(2, 0.1);
    DynamicsOptions opts;
    opts.t_end = 2.0;
    const EmissionTrace radiative = evolve_liouville(array, opts);

    array.gamma_nr.assign(array.size(), 1.0);
    const EmissionTrace lossy = evolve_liouville(array, opts);

    // photons only come from radiative channels, so the yield drops
    CHECK(trapezoid(lossy.times, lossy.rate) <
          trapezoid(radiative.times, radiative.rate) - 0.5);
    CHECK(lossy.rate[0] == doctest::Approx(array.total_gamma0()).epsilon(1e-6));

    opts.n_traj = 2000;
    opts.seed = 13;
    const EmissionTrace sampled = evolve_trajectories(array, opts);
    int outliers = 0;
    for (std::size_t i = 0; i < sampled.times.size(); ++i) {
        if (std::abs(sampled.rate[i] - lossy.rate[i]) > 3.0 * sampled.std_error[i] + 1e-6) {
            ++outliers;
        }
    }
    CHECK(outliers <= 3);
}

// Matches the published 16-emitter comparison; minutes of runtime, so it only
// runs when skips are disabled (--no-skip).
TEST_CASE("16-emitter geometries: early dynamics insensitive to coherent coupling" *
          doctest::skip()) {
    for (int which = 0; which < 3; ++which) {
        LatticeSpec spec;
        if (which == 0) {
            spec.kind = LatticeKind::chain;
            spec.nx = 16;
        } else if (which == 1) {
            spec.kind = LatticeKind::ring;
            spec.nx = 16;
        } else {
            spec.kind = LatticeKind::square;
            spec.nx = spec.ny = 4;
        }
        spec.spacing = 0.1;
        spec.polarization = Polarization::z();
        const EmitterArray array = build_lattice(spec);

        DynamicsOptions opts;
        opts.t_end = 0.15;
        opts.n_traj = 120;
        opts.seed = 1000 + which;
        const EmissionTrace on = evolve_trajectories(array, opts);
        opts.include_hamiltonian = false;
        const EmissionTrace off = evolve_trajectories(array, opts);
        for (std::size_t i = 0; i < on.times.size(); ++i) {
            const double tolerance = 3.0 * (on.std_error[i] + off.std_error[i]) +
                                     0.02 * off.rate[i];
            CHECK(std::abs(on.rate[i] - off.rate[i]) <= tolerance);
        }
    }
}

TEST_CASE("hamiltonian toggle changes late-time dynamics only slightly at small spacing") {
    LatticeSpec spec;
    spec.kind = LatticeKind::chain;
    spec.nx = 4;
    spec.spacing = 0.1;
    const EmitterArray array = build_lattice(spec);
    DynamicsOptions opts;
    opts.t_end = 0.2;
    const EmissionTrace with_h = evolve_liouville(array, opts);
    opts.include_hamiltonian = false;
    const EmissionTrace without_h = evolve_liouville(array, opts);
    for (std::size_t i = 0; i < with_h.times.size(); ++i) {
        const double scale = std::max(1.0, without_h.rate[i]);
        CHECK(std::abs(with_h.rate[i] - without_h.rate[i]) / scale < 0.05);
    }
}
