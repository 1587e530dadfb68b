// ode.hpp — embedded Dormand-Prince 5(4) stepper over Eigen dense states

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "sr/errors.hpp"

namespace sr {

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2'000'000;
};

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

// Integrates y' = f(t, y) from t0 to t1 with adaptive steps clamped so that
// every time in sample_times (sorted, within [t0, t1]) is hit exactly;
// on_sample(index, t, y) fires at each. State is any Eigen dense matrix or
// vector type with real or complex scalars.
template <class State, class Deriv, class Sample>
OdeStats integrate_adaptive(State& y, double t0, double t1, Deriv&& f,
                            const std::vector<double>& sample_times, Sample&& on_sample,
                            const OdeOptions& opts = {}) {
    // Dormand-Prince coefficients
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    OdeStats stats;
    if (t1 <= t0) return stats;

    State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y;
    State ytmp = y, ynew = y, yerr = y;

    double t = t0;
    std::size_t sample_idx = 0;
    while (sample_idx < sample_times.size() && sample_times[sample_idx] <= t0) {
        on_sample(sample_idx, t0, y);
        ++sample_idx;
    }

    f(t, y, k1);
    ++stats.evaluations;

    // initial step from the magnitude of the derivative
    const double y_scale = std::max(1e-30, double(y.norm()));
    const double f_scale = std::max(1e-30, double(k1.norm()));
    double h = std::min({0.01 * y_scale / f_scale, t1 - t0, opts.max_step});
    h = std::max(h, 1e-12);

    while (t < t1) {
        if (stats.accepted + stats.rejected > opts.max_steps) {
            throw NumericalError("ODE integration exceeded the step budget at t = " +
                                 std::to_string(t));
        }
        double target = t1;
        if (sample_idx < sample_times.size()) {
            target = std::min(target, sample_times[sample_idx]);
        }
        h = std::min(h, opts.max_step);
        if (t + h > target) h = target - t;
        if (h <= 1e-15 * std::max(1.0, std::abs(t))) {
            // degenerate step: we are at the target within roundoff
            t = target;
        } else {
            ytmp = y + h * (a21 * k1);
            f(t + c2 * h, ytmp, k2);
            ytmp = y + h * (a31 * k1 + a32 * k2);
            f(t + c3 * h, ytmp, k3);
            ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            f(t + c4 * h, ytmp, k4);
            ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            f(t + c5 * h, ytmp, k5);
            ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            f(t + h, ytmp, k6);
            ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            f(t + h, ynew, k7);
            stats.evaluations += 6;

            yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double scale =
                opts.atol + opts.rtol * std::max(double(y.norm()), double(ynew.norm()));
            const double err = double(yerr.norm()) / (scale * std::sqrt(double(y.size())));

            if (err <= 1.0) {
                t += h;
                y.swap(ynew);
                k1.swap(k7);  // first-same-as-last
                ++stats.accepted;
            } else {
                ++stats.rejected;  // k1 still matches (t, y)
            }
            const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
            if (err > 1.0) continue;
        }

        while (sample_idx < sample_times.size() &&
               t >= sample_times[sample_idx] - 1e-14 * std::max(1.0, t)) {
            on_sample(sample_idx, sample_times[sample_idx], y);
            ++sample_idx;
        }
    }
    return stats;
}

}  // namespace sr
