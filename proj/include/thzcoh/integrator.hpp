#pragma once

// Time stepping on a caller-supplied output grid, backed by Boost.Odeint.
// Adaptive stepping uses a controlled Dormand-Prince 5(4) pair; the fixed
// RK4 path exists for bit-reproducible regression runs.

#include "thzcoh/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace thzcoh {

struct IntegratorOptions {
    enum class Method { adaptive, fixed };

    Method method = Method::adaptive;
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    /// Upper bound on attempted steps between two output times (adaptive).
    std::size_t max_steps = 200000;
    /// RK4 steps between two output times (fixed).
    std::size_t fixed_substeps = 200;
};

inline void validate_time_grid(std::span<const double> grid)
{
    detail::require(!grid.empty(), "time grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        detail::require(std::isfinite(grid[i]), "time grid has non-finite entries");
        if (i > 0) {
            detail::require(grid[i] > grid[i - 1], "time grid must be strictly increasing");
        }
    }
}

/// Integrates dx/dt = system(x, t) from `start_time` (<= grid.front()) and
/// returns the state at every grid time. `start_time` is not reported unless
/// it is also the first grid point.
template <class State, class System>
std::vector<State> integrate_on_grid(System system, State initial, double start_time,
                                     std::span<const double> grid, const IntegratorOptions& options)
{
    namespace odeint = boost::numeric::odeint;
    validate_time_grid(grid);
    detail::require(start_time <= grid.front(), "integration must start at or before the first grid time");

    std::vector<double> times;
    times.reserve(grid.size() + 1);
    if (start_time < grid.front()) {
        times.push_back(start_time);
    }
    times.insert(times.end(), grid.begin(), grid.end());
    const bool skip_first = times.size() > grid.size();

    std::vector<State> out;
    out.reserve(grid.size());
    if (times.size() == 1) {
        out.push_back(initial);
        return out;
    }

    // odeint compares times against an absolute epsilon, so integrate in
    // s = (t - t0) / span, which keeps the step sizes well above it.
    const double t0 = times.front();
    const double span = times.back() - t0;
    std::vector<double> scaled(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        scaled[i] = (times[i] - t0) / span;
    }
    scaled.back() = 1.0;
    auto scaled_system = [&](const State& x, State& dxds, double s) {
        system(x, dxds, t0 + s * span);
        for (auto& v : dxds) {
            v *= span;
        }
    };
    auto scaled_observer = [&](const State& x, double s) {
        if (skip_first && s == 0.0) {
            return;
        }
        out.push_back(x);
    };

    if (options.method == IntegratorOptions::Method::adaptive) {
        auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                               odeint::runge_kutta_dopri5<State>());
        double ds = 1.0 / static_cast<double>(std::max<std::size_t>(times.size() * 16, 1024));
        try {
            odeint::integrate_times(stepper, scaled_system, initial, scaled.begin(), scaled.end(), ds,
                                    scaled_observer, odeint::max_step_checker(options.max_steps));
        } catch (const odeint::odeint_error& e) {
            throw NumericalError(std::string("integrator failed to meet tolerance: ") + e.what());
        }
    } else {
        odeint::runge_kutta4<State> stepper;
        State x = initial;
        scaled_observer(x, 0.0);
        for (std::size_t i = 1; i < scaled.size(); ++i) {
            const double h = (scaled[i] - scaled[i - 1]) / static_cast<double>(options.fixed_substeps);
            double s = scaled[i - 1];
            for (std::size_t k = 0; k < options.fixed_substeps; ++k) {
                stepper.do_step(scaled_system, x, s, h);
                s = scaled[i - 1] + static_cast<double>(k + 1) * h;
            }
            scaled_observer(x, scaled[i]);
        }
    }

    for (const auto& x : out) {
        for (const auto& v : x) {
            if (!std::isfinite(std::abs(v))) {
                throw NumericalError("integrator produced non-finite state");
            }
        }
    }
    return out;
}

} // namespace thzcoh
