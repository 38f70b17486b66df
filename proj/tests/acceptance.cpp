// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "support.hpp"
#include "thzcoh/thzcoh.hpp"

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace thzcoh;
using fixture::lt_geometry;
using fixture::rt_geometry;
using fixture::ruby_lt;
using fixture::ruby_rt;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

PulseSpec gaussian_with_area(double area, double width, double center = 0.0)
{
    return {PulseShape::gaussian, gaussian_rabi_for_area(area, width), width, center, 0.0};
}

Outcome maximal_coherence()
{
    const auto p = gaussian_with_area(constants::pi, 1e-12);
    const auto grid = pulse_grid(p, p, 401);
    const double closed = asymptotic_coherence(p);
    const double reduced = evolve_reduced(p, grid).back().beta;
    const double full =
        evolve_full(p, p, RelaxationSpec::none(), VSystemState::ground(), grid).states.back().sigma_cb().real();
    double err = 0.0;
    for (double v : {closed, reduced, full}) {
        err = std::max(err, std::abs(v - 0.5));
    }
    return {err <= 1e-6, fmt("beta(inf) closed %.9f reduced %.9f full %.9f", closed, reduced, full)};
}

Outcome room_temperature_coherence()
{
    const PulseSpec p{PulseShape::gaussian, 2e11, 1e-12, 0.0, 0.0};
    const double closed = asymptotic_coherence(p);
    const double reduced = evolve_reduced(p, pulse_grid(p, p, 401)).back().beta;
    const bool ok = std::abs(closed - 0.212) <= 0.005 && std::abs(reduced - 0.212) <= 0.005;
    return {ok, fmt("sigma_max closed %.5f numeric %.5f (target 0.212 +- 0.005)", closed, reduced)};
}

Outcome room_temperature_energy()
{
    const double e = thz_energy_fid(0.21, ruby_rt(), rt_geometry());
    return {std::abs(e / 630e-12 - 1.0) <= 0.15, fmt("E_THz %.4g pJ (target 630 pJ +- 15%%)", e * 1e12)};
}

Outcome low_temperature_energy()
{
    const double e = thz_energy_fid(0.5, ruby_lt(), lt_geometry());
    return {e >= 6.0e-6 && e <= 9.7e-6, fmt("E_THz %.4g uJ (target [6.0, 9.7] uJ)", e * 1e6)};
}

Outcome optical_pulse()
{
    const double e = optical_pulse_energy(2e11, 1e-12, rt_geometry(), ruby_rt());
    return {std::abs(e / 27e-3 - 1.0) <= 0.15, fmt("E_opt %.4g mJ (target 27 mJ +- 15%%)", e * 1e3)};
}

Outcome absorption()
{
    const double f = absorbed_fraction(ruby_rt(), rt_geometry());
    return {std::abs(f - 0.47) <= 0.01, fmt("absorbed fraction %.4f (target 0.47 +- 0.01)", f)};
}

Outcome phase_matching()
{
    const auto m = ruby_rt();
    const auto g = cw_phase_match(m, m.lambda_opt, m.lambda_thz());
    const bool ok = std::abs(g.phi / 3e-3 - 1.0) <= 0.2 && std::abs(g.theta_thz / (constants::pi / 3.0) - 1.0) <= 0.02;
    return {ok, fmt("phi %.4g rad (target 3e-3 +- 20%%), theta %.4f rad (target %.4f +- 2%%)", g.phi, g.theta_thz,
                    constants::pi / 3.0)};
}

Outcome peak_fields()
{
    const auto rt = ruby_rt();
    const auto lt = ruby_lt();
    const double e_rt = thz_energy_fid(0.21, rt, rt_geometry());
    const double e_lt = thz_energy_fid(0.5, lt, lt_geometry());
    const double f_rt = focused_field(e_rt, 1.0 / rt.gamma_thz, 300e-6);
    const double f_lt = focused_field(e_lt, 1.0 / lt.gamma_thz, 300e-6);
    const bool ok = std::abs(f_rt / 2.3e6 - 1.0) <= 0.25 && f_lt / 2.3e7 <= 2.5 && 2.3e7 / f_lt <= 2.5;
    return {ok, fmt("RT %.4g kV/cm (23 +- 25%%), LT %.4g kV/cm (230 within x2.5)", f_rt * 1e-5, f_lt * 1e-5)};
}

Outcome integrator_agreement()
{
    fixture::Draw draw(5150);
    double reduced_err = 0.0;
    for (int i = 0; i < 50; ++i) {
        const auto p = gaussian_with_area(draw.uniform(0.0, 4.0 * constants::pi), draw.log_uniform(1e-14, 1e-9),
                                          draw.uniform(-1e-12, 1e-12));
        for (const auto& s : evolve_reduced(p, pulse_grid(p, p, 301))) {
            const auto exact = analytic_coherence(p, s.t);
            reduced_err = std::max({reduced_err, std::abs(s.beta - exact.beta), std::abs(s.xi - exact.xi)});
        }
    }
    double full_err = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto p = gaussian_with_area(draw.uniform(0.0, 4.0 * constants::pi), draw.log_uniform(1e-13, 1e-10));
        const auto grid = pulse_grid(p, p, 201);
        const auto full = evolve_full(p, p, RelaxationSpec::none(), VSystemState::ground(), grid);
        const auto reduced = evolve_reduced(p, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            full_err = std::max({full_err, std::abs(full.states[k].sigma_cb() - complex(reduced[k].beta)),
                                 std::abs(full.states[k].xi() - reduced[k].xi)});
        }
    }
    return {reduced_err < 1e-6 && full_err < 1e-6,
            fmt("max error reduced vs closed form %.2e, full vs reduced %.2e (limit 1e-6)", reduced_err, full_err)};
}

RelaxationSpec random_relaxation(fixture::Draw& draw)
{
    for (;;) {
        const RelaxationSpec r{draw.log_uniform(1e10, 1e12), draw.log_uniform(1e10, 1e12),
                               draw.log_uniform(1e8, 1e10), draw.log_uniform(1e8, 1e10)};
        try {
            r.validate();
            return r;
        } catch (const ValidationError&) {
        }
    }
}

Outcome state_invariants()
{
    fixture::Draw draw(6060);
    double worst = 0.0;
    double min_eig = 1.0;
    for (int i = 0; i < 10; ++i) {
        const PulseSpec p1{PulseShape::gaussian, draw.log_uniform(1e10, 1e12), 1e-12, 0.0, draw.uniform(-1e11, 1e11)};
        const PulseSpec p2{PulseShape::flat_top, draw.log_uniform(1e10, 1e12), 2e-12, 1e-12, draw.uniform(-1e11, 1e11)};
        const auto relax = random_relaxation(draw);
        for (const auto& s : evolve_full(p1, p2, relax, VSystemState::ground(), pulse_grid(p1, p2, 301)).states) {
            worst = std::max({worst, s.trace_error(), s.hermiticity_error()});
            min_eig = std::min(min_eig, s.min_eigenvalue());
        }
    }
    double population_err = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto p = gaussian_with_area(draw.uniform(0.0, 4.0 * constants::pi), 1e-12);
        for (const auto& s : evolve_full(p, p, RelaxationSpec::none(), VSystemState::ground(), pulse_grid(p, p, 201))
                                 .states) {
            population_err = std::max(population_err, std::abs(s.rho_a() + 2.0 * s.beta() - 1.0));
        }
    }
    const bool ok = worst <= 1e-9 && min_eig >= -1e-9 && population_err <= 1e-9;
    return {ok, fmt("trace/hermiticity %.2e, min eigenvalue %.2e, |rho_a + 2 beta - 1| %.2e (limit 1e-9)", worst,
                    min_eig, population_err)};
}

complex closed_form_field(double sigma, const MaterialParams& m, const CrystalGeometry& g, double t)
{
    const double eta = m.density * *m.gamma_thz_lt_ref * *m.sigma_abs_thz_lt_ref;
    const double a = m.gamma_thz * m.n_thz / constants::c - m.kappa_thz;
    const double transit = g.length_thz * m.n_thz / constants::c;
    const double grown = t < transit ? std::exp(a * constants::c * t / m.n_thz) : std::exp(a * g.length_thz);
    return complex(0.0, eta * sigma * std::exp(-m.gamma_thz * t) * (grown - 1.0) / a);
}

Outcome propagation()
{
    double field_err = 0.0;
    double energy_err = 0.0;
    for (const auto& [m, g] : {std::pair{ruby_rt(), rt_geometry()}, std::pair{ruby_lt(), lt_geometry()}}) {
        const double sigma = 0.3;
        const auto grid = emission_time_grid(m.gamma_thz, m, g, 2000);
        const auto w = propagate_thz_numeric(exponential_source(sigma, m.gamma_thz), m, g, grid);
        double peak = 0.0;
        for (double t : grid) {
            peak = std::max(peak, std::abs(closed_form_field(sigma, m, g, t)));
        }
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto exact = closed_form_field(sigma, m, g, grid[k]);
            const double scale = std::abs(exact) > 0.0 ? std::abs(exact) : peak;
            field_err = std::max(field_err, std::abs(w.rabi_samples[k] - exact) / scale);
        }
        energy_err = std::max(energy_err, std::abs(w.energy() / thz_energy_fid(sigma, m, g) - 1.0));
    }
    return {field_err <= 1e-4 && energy_err <= 1e-3,
            fmt("field relative error %.2e (limit 1e-4), energy vs time integral %.2e (limit 1e-3)", field_err,
                energy_err)};
}

Outcome scaling_laws()
{
    const auto m = ruby_rt();
    const auto g = rt_geometry();
    double sq_err = 0.0;
    for (double s : {0.01, 0.1, 0.3}) {
        sq_err = std::max(sq_err, std::abs(thz_energy_fid(2.0 * s, m, g) / thz_energy_fid(s, m, g) - 4.0));
    }
    const PulseSpec p{PulseShape::gaussian, 1e10, 1e-12, 0.0, 0.0};
    const double k_z = 1e4;
    double hi = 0.0;
    double lo = 1.0;
    for (int i = 0; i < 32; ++i) {
        const double v = grating_coherence(p, p, k_z, constants::pi / k_z * i / 32.0, 1.0).value.real();
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    const double contrast = (hi - lo) / (hi + lo);
    double null = 0.0;
    for (int n = 1; n <= 5; ++n) {
        null = std::max(null, std::abs(phase_mismatch_factor(2.0 * constants::pi * n / 1e-2, 1e-2)));
    }
    const bool ok = sq_err <= 1e-12 && std::abs(contrast - 1.0) <= 1e-6 && null <= 1e-12;
    return {ok, fmt("sigma^2 ratio error %.1e, grating contrast %.9f, |sinc| at nulls %.1e", sq_err, contrast, null)};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"pi-area pulse gives maximal coherence", maximal_coherence},
        {"room-temperature 1 ps coherence", room_temperature_coherence},
        {"room-temperature THz energy", room_temperature_energy},
        {"low-temperature THz energy", low_temperature_energy},
        {"optical pulse energy", optical_pulse},
        {"absorbed pump fraction", absorption},
        {"phase-matching angles", phase_matching},
        {"focused peak fields", peak_fields},
        {"integrator agreement", integrator_agreement},
        {"density-matrix invariants", state_invariants},
        {"numeric propagation", propagation},
        {"scaling laws", scaling_laws},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%-4s criterion %2d  %-38s %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    }
    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
