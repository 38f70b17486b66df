#pragma once

// Coherent preparation of the THz coherence sigma_cb in a V system driven by
// two optical fields.
//
// Rotating-frame Hamiltonian (hbar = 1, generated THz field omitted):
//   H = -d1 |b><b| - d2 |c><c| - (O1(t) |b><a| + O2(t) |c><a| + h.c.)
// Master equation:
//   drho/dt = -i [H, rho] - relaxation
// with relaxation acting as coherence decay at the quoted rates and optional
// population decay of b and c back into a.
//
// For equal real resonant drives O1 = O2 = O(t) and no relaxation the system
// reduces to
//   dxi/dt   = 2 i O (1 - 4 beta)
//   dbeta/dt = -i O xi
// with rho_a = 1 - 2 beta, solved by
//   xi   = (sqrt(2) i / 2) sin(Theta),  beta = (1 - cos(Theta)) / 4,
//   Theta(t) = 2 sqrt(2) * integral_{-inf}^{t} O dt'.

#include "thzcoh/density_matrix.hpp"
#include "thzcoh/error.hpp"
#include "thzcoh/integrator.hpp"
#include "thzcoh/pulse.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace thzcoh {

struct RelaxationSpec {
    double gamma_opt = 0.0;           // s^-1, decay of sigma_ba and sigma_ca
    double gamma_thz = 0.0;           // s^-1, decay of sigma_cb
    double population_decay_b = 0.0;  // s^-1, b -> a
    double population_decay_c = 0.0;  // s^-1, c -> a

    static RelaxationSpec none() { return {}; }

    void validate() const
    {
        for (double r : {gamma_opt, gamma_thz, population_decay_b, population_decay_c}) {
            detail::require(std::isfinite(r) && r >= 0.0, "relaxation rates must be >= 0");
        }
        // Coherence rates below the population-decay floor would break positivity.
        detail::require(gamma_opt >= 0.5 * std::max(population_decay_b, population_decay_c),
                        "optical coherence decay is below half the population decay rate");
        detail::require(gamma_thz >= 0.5 * (population_decay_b + population_decay_c),
                        "THz coherence decay is below the mean population decay rate");
        // Pure dephasing rates are half squared distances between level
        // vectors, so their square roots must obey the triangle inequality.
        const double ba = std::sqrt(gamma_opt - 0.5 * population_decay_b);
        const double ca = std::sqrt(gamma_opt - 0.5 * population_decay_c);
        const double cb = std::sqrt(gamma_thz - 0.5 * (population_decay_b + population_decay_c));
        const double slack = 1e-12 * (ba + ca + cb);
        detail::require(cb <= ba + ca + slack && ba <= ca + cb + slack && ca <= ba + cb + slack,
                        "dephasing rates cannot come from a positive master equation");
    }
};

struct CoherenceValue {
    complex xi;
    double beta = 0.0;
};

/// Closed-form (xi, beta) at time t for equal resonant drives `pulse` and no relaxation.
inline CoherenceValue analytic_coherence(const PulseSpec& pulse, double t)
{
    pulse.validate();
    const double theta = 2.0 * std::numbers::sqrt2 * pulse.cumulative_integral(t);
    return {complex(0.0, std::numbers::sqrt2 / 2.0 * std::sin(theta)), 0.25 * (1.0 - std::cos(theta))};
}

/// beta after the pulse has passed: (1 - cos S) / 4.
inline double asymptotic_coherence(const PulseSpec& pulse)
{
    return 0.25 * (1.0 - std::cos(pulse_area(pulse)));
}

struct ReducedSample {
    double t = 0.0;
    complex xi;
    double beta = 0.0;
    double rho_a = 1.0;
};

/// Integrates the reduced symmetric system from the ground state. Integration
/// starts at the earlier of the pulse window start and the first grid time.
inline std::vector<ReducedSample> evolve_reduced(const PulseSpec& pulse, std::span<const double> t_grid,
                                                 const IntegratorOptions& options = {})
{
    pulse.validate();
    detail::require(pulse.detuning == 0.0, "reduced system assumes resonant driving");
    validate_time_grid(t_grid);

    using State = std::array<double, 3>;  // Re xi, Im xi, beta
    auto rhs = [&pulse](const State& x, State& dxdt, double t) {
        const double omega = pulse.envelope(t);
        const complex xi(x[0], x[1]);
        const complex dxi = complex(0.0, 2.0 * omega) * (1.0 - 4.0 * x[2]);
        const complex dbeta = complex(0.0, -omega) * xi;
        dxdt = {dxi.real(), dxi.imag(), dbeta.real()};
    };

    const double start = std::min(pulse.window_start(), t_grid.front());
    const auto states = integrate_on_grid(rhs, State{0.0, 0.0, 0.0}, start, t_grid, options);

    std::vector<ReducedSample> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& x = states[i];
        out.push_back({t_grid[i], complex(x[0], x[1]), x[2], 1.0 - 2.0 * x[2]});
    }
    return out;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<VSystemState> states;
};

namespace detail {

using FlatDensity = std::array<complex, 9>;

inline FlatDensity flatten(const DensityMatrix& m)
{
    FlatDensity f{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            f[static_cast<std::size_t>(3 * i + j)] = m(i, j);
        }
    }
    return f;
}

inline DensityMatrix unflatten(const FlatDensity& f)
{
    DensityMatrix m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m(i, j) = f[static_cast<std::size_t>(3 * i + j)];
        }
    }
    return m;
}

/// Right-hand side of the master equation for the flattened density matrix.
struct MasterEquation {
    PulseSpec drive_1;
    PulseSpec drive_2;
    RelaxationSpec relax;

    void operator()(const FlatDensity& x, FlatDensity& dxdt, double t) const
    {
        const DensityMatrix rho = unflatten(x);
        DensityMatrix h = DensityMatrix::Zero();
        const double o1 = drive_1.envelope(t);
        const double o2 = drive_2.envelope(t);
        h(level::b, level::b) = -drive_1.detuning;
        h(level::c, level::c) = -drive_2.detuning;
        h(level::b, level::a) = -o1;
        h(level::a, level::b) = -o1;
        h(level::c, level::a) = -o2;
        h(level::a, level::c) = -o2;

        DensityMatrix d = complex(0.0, -1.0) * (h * rho - rho * h);

        const double g_opt = relax.gamma_opt;
        const double g_thz = relax.gamma_thz;
        d(level::b, level::a) -= g_opt * rho(level::b, level::a);
        d(level::a, level::b) -= g_opt * rho(level::a, level::b);
        d(level::c, level::a) -= g_opt * rho(level::c, level::a);
        d(level::a, level::c) -= g_opt * rho(level::a, level::c);
        d(level::c, level::b) -= g_thz * rho(level::c, level::b);
        d(level::b, level::c) -= g_thz * rho(level::b, level::c);

        const complex out_b = relax.population_decay_b * rho(level::b, level::b);
        const complex out_c = relax.population_decay_c * rho(level::c, level::c);
        d(level::b, level::b) -= out_b;
        d(level::c, level::c) -= out_c;
        d(level::a, level::a) += out_b + out_c;

        dxdt = flatten(d);
    }
};

} // namespace detail

/// Evolves the full 3x3 density matrix. `initial` is the state at t_grid.front().
inline Trajectory evolve_full(const PulseSpec& drive_1, const PulseSpec& drive_2, const RelaxationSpec& relax,
                              const VSystemState& initial, std::span<const double> t_grid,
                              const IntegratorOptions& options = {})
{
    drive_1.validate();
    drive_2.validate();
    relax.validate();
    initial.validate();
    validate_time_grid(t_grid);

    const detail::MasterEquation rhs{drive_1, drive_2, relax};
    const auto states =
        integrate_on_grid(rhs, detail::flatten(initial.matrix()), t_grid.front(), t_grid, options);

    Trajectory out;
    out.times.assign(t_grid.begin(), t_grid.end());
    out.states.reserve(states.size());
    for (const auto& s : states) {
        out.states.emplace_back(detail::unflatten(s));
    }
    return out;
}

/// Uniform grid of `samples` points covering the union of the pulse windows.
inline std::vector<double> pulse_grid(const PulseSpec& p1, const PulseSpec& p2, std::size_t samples)
{
    detail::require(samples >= 2, "need at least two grid samples");
    const double t0 = std::min(p1.window_start(), p2.window_start());
    const double t1 = std::max(p1.window_end(), p2.window_end());
    std::vector<double> grid(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
    }
    return grid;
}

} // namespace thzcoh
