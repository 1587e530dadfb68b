#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sr/channels.hpp"
#include "sr/errors.hpp"
#include "sr/geometry.hpp"
#include "sr/rng.hpp"

using namespace sr;

TEST_CASE("point-limit spectrum is one bright channel") {
    const int n = 7;
    const DecayChannels ch = decay_channels(interaction_matrices(dicke_point(n)));
    CHECK(ch.rates[0] == doctest::Approx(n).epsilon(1e-12));
    for (int nu = 1; nu < n; ++nu) CHECK(std::abs(ch.rates[nu]) < 1e-12);
}

TEST_CASE("independent emitters decay at the bare rate in every channel") {
    InteractionMatrices m;
    m.J = MatXc::Zero(4, 4);
    m.Gamma = MatXc::Identity(4, 4);
    const DecayChannels ch = decay_channels(m);
    for (int nu = 0; nu < 4; ++nu) CHECK(ch.rates[nu] == doctest::Approx(1.0));
}

TEST_CASE("orthonormality, completeness and the rate sum rule") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 6);
        EmitterArray array = oracle::random_array(n, rng, 0.08, 1.2, trial % 2 == 1);
        for (int i = 0; i < n; ++i) array.gamma0[i] = 0.5 + rng.uniform();
        const InteractionMatrices m = interaction_matrices(array);
        const DecayChannels ch = decay_channels(m);

        const MatXc gram = ch.coefficients * ch.coefficients.adjoint();
        CHECK((gram - MatXc::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);

        const VecX emitter = ch.emitter_rates();
        for (int i = 0; i < n; ++i) {
            CHECK(emitter[i] == doctest::Approx(array.gamma0[i]).epsilon(1e-10));
        }
        CHECK(ch.rates.sum() == doctest::Approx(array.total_gamma0()).epsilon(1e-10));
    }
}

TEST_CASE("rows are matched to descending rates") {
    Rng rng(19);
    const EmitterArray array = oracle::random_array(6, rng);
    const InteractionMatrices m = interaction_matrices(array);
    const DecayChannels ch = decay_channels(m);
    for (int nu = 0; nu + 1 < 6; ++nu) CHECK(ch.rates[nu] >= ch.rates[nu + 1]);
    // eigenpair residual: Gamma v = rate v
    for (int nu = 0; nu < 6; ++nu) {
        const VecXc v = ch.coefficients.row(nu).transpose();
        CHECK((m.Gamma * v - ch.rates[nu] * v).norm() < 1e-10);
    }
}

TEST_CASE("dense chain splits into bright and dark channels") {
    LatticeSpec spec;
    spec.kind = LatticeKind::chain;
    spec.nx = 100;
    spec.spacing = 0.1;
    spec.polarization = Polarization::x();  // along the chain
    const DecayChannels ch = decay_channels(interaction_matrices(build_lattice(spec)));
    CHECK(ch.rates[0] > 3.0);
    CHECK(ch.rates[99] < 1e-2);
    CHECK(ch.rates.sum() == doctest::Approx(100.0).epsilon(1e-10));
}

TEST_CASE("trace moments equal eigenvalue moments") {
    Rng rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 8);
        const EmitterArray array = oracle::random_array(n, rng, 0.08, 1.4, trial % 3 == 0);
        const InteractionMatrices m = interaction_matrices(array);
        const RateMoments fast = rate_moments(m);
        const RateMoments eig = rate_moments(decay_channels(m).rates);
        CHECK(fast.m1 == doctest::Approx(eig.m1).epsilon(1e-10));
        CHECK(fast.m2 == doctest::Approx(eig.m2).epsilon(1e-10));
        CHECK(fast.m3 == doctest::Approx(eig.m3).epsilon(1e-10));
        CHECK(fast.variance == doctest::Approx(eig.variance).epsilon(1e-10));
    }
}

TEST_CASE("point-limit variance equals n - 1") {
    const RateMoments moments = rate_moments(interaction_matrices(dicke_point(4)));
    CHECK(moments.variance == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("diagonal dissipator has zero variance") {
    InteractionMatrices m;
    m.J = MatXc::Zero(5, 5);
    m.Gamma = MatXc::Identity(5, 5);
    CHECK(rate_moments(m).variance == doctest::Approx(0.0));
    CHECK(decay_rate_variance(m) == doctest::Approx(0.0));
}

TEST_CASE("moments are invariant under relabeling") {
    Rng rng(37);
    const EmitterArray array = oracle::random_array(6, rng);
    EmitterArray reversed = array;
    for (int i = 0; i < 6; ++i) {
        reversed.positions[i] = array.positions[5 - i];
        reversed.dipoles[i] = array.dipoles[5 - i];
    }
    const RateMoments a = rate_moments(interaction_matrices(array));
    const RateMoments b = rate_moments(interaction_matrices(reversed));
    CHECK(a.m1 == doctest::Approx(b.m1).epsilon(1e-12));
    CHECK(a.m2 == doctest::Approx(b.m2).epsilon(1e-12));
    CHECK(a.m3 == doctest::Approx(b.m3).epsilon(1e-12));
}

TEST_CASE("skipping the cubic moment is explicit") {
    const RateMoments moments = rate_moments(interaction_matrices(dicke_point(4)), false);
    CHECK(!moments.has_m3());
    CHECK(moments.m2 == doctest::Approx(16.0));
}

TEST_CASE("clamping removes noise-level negatives and flags real ones") {
    const DecayChannels ch = decay_channels(interaction_matrices(dicke_point(6)));
    const VecX clamped = ch.clamped_rates();
    for (int nu = 0; nu < 6; ++nu) CHECK(clamped[nu] >= 0.0);

    DecayChannels broken = ch;
    broken.rates[5] = -1.0;
    CHECK_THROWS_AS(broken.clamped_rates(), NumericalError);
}
