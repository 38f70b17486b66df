#pragma once

// End-to-end scenarios: optical drive -> THz coherence -> THz emission ->
// energy, focused field and conversion efficiency.

#include "thzcoh/cw.hpp"
#include "thzcoh/dynamics.hpp"
#include "thzcoh/error.hpp"
#include "thzcoh/kv_file.hpp"
#include "thzcoh/materials.hpp"
#include "thzcoh/propagation.hpp"
#include "thzcoh/pulse.hpp"
#include "thzcoh/units.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace thzcoh {

enum class DriveMode { gaussian, flat_top, cw };
enum class CoherenceMethod { analytic, numeric };
enum class DriveStrength { peak_rabi, peak_intensity, pulse_energy, pulse_area };

inline std::string_view drive_mode_name(DriveMode m)
{
    switch (m) {
    case DriveMode::gaussian: return "gaussian";
    case DriveMode::flat_top: return "flat_top";
    case DriveMode::cw: return "cw";
    }
    return "";
}

inline std::string_view drive_strength_key(DriveStrength s)
{
    switch (s) {
    case DriveStrength::peak_rabi: return "peak_rabi";
    case DriveStrength::peak_intensity: return "peak_intensity";
    case DriveStrength::pulse_energy: return "pulse_energy";
    case DriveStrength::pulse_area: return "pulse_area";
    }
    return "";
}

struct ScenarioConfig {
    std::string label = "scenario";
    std::string material;
    DriveMode drive = DriveMode::gaussian;
    DriveStrength strength = DriveStrength::peak_rabi;
    double strength_value = 0.0;  // SI value of the chosen strength key
    double duration = 0.0;        // Gaussian width / flat-top half width / CW pulse length, s
    int pulses = 2;
    CoherenceMethod coherence = CoherenceMethod::analytic;
    bool relaxation = true;
    std::optional<double> sigma_max;
    CrystalGeometry geometry;
    bool diffraction = false;
    double spot = 300e-6;  // m
    std::string waveform_out;
    std::string trajectory_out;
    std::size_t waveform_samples = 2000;
    std::size_t trajectory_samples = 2001;

    void validate() const
    {
        detail::require(!material.empty(), "config: 'material' is required");
        detail::require(std::isfinite(strength_value) && strength_value >= 0.0,
                        "config: '" + std::string(drive_strength_key(strength)) + "' must be >= 0");
        detail::require(std::isfinite(duration) && duration > 0.0, "config: 'duration' must be > 0");
        detail::require(pulses >= 1, "config: 'pulses' must be >= 1");
        detail::require(!(drive == DriveMode::cw && strength == DriveStrength::pulse_area),
                        "config: 'pulse_area' is not defined for cw drive");
        if (sigma_max) {
            detail::require(*sigma_max >= 0.0 && *sigma_max <= 1.0, "config: 'sigma_max' must lie in [0, 1]");
        }
        detail::require(spot > 0.0, "config: 'spot' must be > 0");
        detail::require(!diffraction || geometry.aperture.has_value(),
                        "config: 'diffraction = on' needs 'aperture'");
        detail::require(waveform_samples >= 2 && trajectory_samples >= 2,
                        "config: sample counts must be >= 2");
        try {
            geometry.validate();
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("config: ") + e.what());
        }
    }

    /// Dimension of a numeric key that `set_parameter` accepts.
    static std::optional<Dimension> parameter_dimension(std::string_view name)
    {
        if (name == "peak_rabi") return Dimension::rate;
        if (name == "peak_intensity") return Dimension::intensity;
        if (name == "pulse_energy") return Dimension::energy;
        if (name == "pulse_area") return Dimension::dimensionless;
        if (name == "duration") return Dimension::time;
        if (name == "sigma_max") return Dimension::dimensionless;
        if (name == "length_thz" || name == "length_opt" || name == "aperture" || name == "spot")
            return Dimension::length;
        if (name == "area_thz" || name == "area_opt") return Dimension::area;
        return std::nullopt;
    }

    /// Sets a numeric field by its config key (SI value). Setting one of the
    /// drive-strength keys replaces the current strength specification.
    void set_parameter(std::string_view name, double value)
    {
        if (name == "peak_rabi") { strength = DriveStrength::peak_rabi; strength_value = value; }
        else if (name == "peak_intensity") { strength = DriveStrength::peak_intensity; strength_value = value; }
        else if (name == "pulse_energy") { strength = DriveStrength::pulse_energy; strength_value = value; }
        else if (name == "pulse_area") { strength = DriveStrength::pulse_area; strength_value = value; }
        else if (name == "duration") duration = value;
        else if (name == "sigma_max") sigma_max = value;
        else if (name == "length_thz") geometry.length_thz = value;
        else if (name == "length_opt") geometry.length_opt = value;
        else if (name == "area_thz") geometry.area_thz = value;
        else if (name == "area_opt") geometry.area_opt = value;
        else if (name == "aperture") geometry.aperture = value;
        else if (name == "spot") spot = value;
        else throw ValidationError("'" + std::string(name) + "' is not a numeric config parameter");
    }
};

namespace detail {

inline bool parse_switch(const KeyValueFile& kv, std::string_view key, bool fallback)
{
    const auto v = kv.get(key);
    if (!v) {
        return fallback;
    }
    if (*v == "on" || *v == "true") {
        return true;
    }
    if (*v == "off" || *v == "false") {
        return false;
    }
    throw ValidationError(kv.source() + ": '" + std::string(key) + "' must be on or off");
}

inline std::size_t parse_count(const KeyValueFile& kv, std::string_view key, std::size_t fallback)
{
    const auto v = kv.get(key);
    if (!v) {
        return fallback;
    }
    const double d = parse_number(*v);
    if (d < 0.0 || d != std::floor(d)) {
        throw ValidationError(kv.source() + ": '" + std::string(key) + "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(d);
}

} // namespace detail

inline ScenarioConfig scenario_from_kv(const KeyValueFile& kv)
{
    kv.check_keys({"label", "material", "drive", "peak_rabi", "peak_intensity", "pulse_energy", "pulse_area",
                   "duration", "pulses", "coherence", "relaxation", "sigma_max", "length_thz", "area_thz",
                   "area_opt", "length_opt", "aperture", "diffraction", "spot", "waveform_out", "trajectory_out",
                   "waveform_samples", "trajectory_samples"});
    ScenarioConfig c;
    c.label = kv.get("label").value_or(std::filesystem::path(kv.source()).stem().string());
    c.material = kv.require("material");

    const auto drive = kv.get("drive").value_or("gaussian");
    if (drive == "gaussian") c.drive = DriveMode::gaussian;
    else if (drive == "flat_top") c.drive = DriveMode::flat_top;
    else if (drive == "cw") c.drive = DriveMode::cw;
    else throw ValidationError(kv.source() + ": 'drive' must be gaussian, flat_top or cw");

    int strengths = 0;
    for (auto s : {DriveStrength::peak_rabi, DriveStrength::peak_intensity, DriveStrength::pulse_energy,
                   DriveStrength::pulse_area}) {
        const auto key = drive_strength_key(s);
        if (!kv.contains(key)) {
            continue;
        }
        ++strengths;
        c.strength = s;
        c.strength_value = kv.require_quantity(key, *ScenarioConfig::parameter_dimension(key));
    }
    if (strengths != 1) {
        throw ValidationError(kv.source() +
                              ": exactly one of peak_rabi, peak_intensity, pulse_energy, pulse_area is required");
    }

    c.duration = kv.require_quantity("duration", Dimension::time);
    c.pulses = static_cast<int>(detail::parse_count(kv, "pulses", 2));

    const auto coherence = kv.get("coherence").value_or("analytic");
    if (coherence == "analytic") c.coherence = CoherenceMethod::analytic;
    else if (coherence == "numeric") c.coherence = CoherenceMethod::numeric;
    else throw ValidationError(kv.source() + ": 'coherence' must be analytic or numeric");

    c.relaxation = detail::parse_switch(kv, "relaxation", true);
    c.sigma_max = kv.quantity("sigma_max", Dimension::dimensionless);
    c.geometry.length_thz = kv.require_quantity("length_thz", Dimension::length);
    c.geometry.area_thz = kv.require_quantity("area_thz", Dimension::area);
    c.geometry.area_opt = kv.require_quantity("area_opt", Dimension::area);
    c.geometry.length_opt = kv.require_quantity("length_opt", Dimension::length);
    c.geometry.aperture = kv.quantity("aperture", Dimension::length);
    c.diffraction = detail::parse_switch(kv, "diffraction", false);
    c.spot = kv.quantity("spot", Dimension::length).value_or(300e-6);
    c.waveform_out = kv.get("waveform_out").value_or("");
    c.trajectory_out = kv.get("trajectory_out").value_or("");
    c.waveform_samples = detail::parse_count(kv, "waveform_samples", 2000);
    c.trajectory_samples = detail::parse_count(kv, "trajectory_samples", 2001);
    try {
        c.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(kv.source() + ": " + e.what());
    }
    return c;
}

inline ScenarioConfig load_scenario(const std::string& path) { return scenario_from_kv(KeyValueFile::load(path)); }

// ---------------------------------------------------------------------------

struct ReportRow {
    std::string label;
    std::string material;
    std::string drive;
    double sigma_max = 0.0;
    double pulse_area = std::numeric_limits<double>::quiet_NaN();
    double decay_rate = 0.0;         // s^-1, decay of the emitting coherence
    double e_thz = 0.0;              // J
    double peak_field = 0.0;         // V/m
    double omega_0 = 0.0;            // rad/s
    double i_peak = 0.0;             // W/m^2
    double e_opt_pulse = 0.0;        // J, one pulse
    double absorbed_fraction = 0.0;
    double e_opt_total = 0.0;        // J, all pulses, incident
    double efficiency = 0.0;         // E_THz / E_opt_total
    double efficiency_absorbed = 0.0;  // E_THz / (pulses E_opt_pulse)
    double efficiency_limit = 0.0;   // omega_thz / omega_opt
    std::string damage = "unknown";
    double damage_margin = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> flags;
    std::string error;
};

struct ScenarioResult {
    ReportRow row;
    std::optional<THzWaveform> waveform;
    std::optional<Trajectory> trajectory;
};

struct ScenarioOptions {
    std::filesystem::path materials_dir = materials_directory();
    IntegratorOptions integrator{};
    bool want_waveform = false;
    bool want_trajectory = false;
};

namespace detail {

/// Pure-state reconstruction of the analytic symmetric solution.
inline VSystemState analytic_state(const PulseSpec& pulse, double t)
{
    const auto v = analytic_coherence(pulse, t);
    DensityMatrix rho = DensityMatrix::Zero();
    const complex alpha = 0.5 * v.xi;
    rho(level::a, level::a) = 1.0 - 2.0 * v.beta;
    rho(level::b, level::b) = v.beta;
    rho(level::c, level::c) = v.beta;
    rho(level::b, level::a) = alpha;
    rho(level::c, level::a) = alpha;
    rho(level::c, level::b) = v.beta;
    rho(level::a, level::b) = std::conj(alpha);
    rho(level::a, level::c) = std::conj(alpha);
    rho(level::b, level::c) = v.beta;
    return VSystemState(rho);
}

inline double derive_rabi(const ScenarioConfig& c, const MaterialParams& mat)
{
    switch (c.strength) {
    case DriveStrength::peak_rabi: return c.strength_value;
    case DriveStrength::peak_intensity: return rabi_from_intensity(c.strength_value, mat);
    case DriveStrength::pulse_energy: return rabi_from_pulse_energy(c.strength_value, c.duration, c.geometry, mat);
    case DriveStrength::pulse_area:
        return c.drive == DriveMode::flat_top ? flat_top_rabi_for_area(c.strength_value, c.duration)
                                              : gaussian_rabi_for_area(c.strength_value, c.duration);
    }
    return 0.0;
}

inline double max_abs_sigma_cb(const Trajectory& traj)
{
    double best = 0.0;
    for (const auto& s : traj.states) {
        best = std::max(best, std::abs(s.sigma_cb()));
    }
    return best;
}

} // namespace detail

/// Runs the pipeline: drive strength -> damage check -> coherence -> THz
/// emission -> energy, focused field, efficiency.
inline ScenarioResult run_scenario(const ScenarioConfig& config, const ScenarioOptions& options = {})
{
    config.validate();
    MaterialParams mat = find_material(config.material, options.materials_dir);
    const CrystalGeometry& geom = config.geometry;

    ScenarioResult result;
    ReportRow& row = result.row;
    row.label = config.label;
    row.material = mat.name;
    row.drive = std::string(drive_mode_name(config.drive));

    if (config.diffraction) {
        mat.kappa_thz += diffraction_loss(mat.lambda_thz(), *geom.aperture);
        row.flags.push_back("diffraction loss included");
    }

    const double omega_0 = detail::derive_rabi(config, mat);
    row.omega_0 = omega_0;
    row.i_peak = peak_intensity(omega_0, mat);
    const auto damage = damage_check(row.i_peak, config.duration, mat);
    row.damage = std::string(damage_status_name(damage.status));
    row.damage_margin = damage.margin;
    if (damage.status != DamageStatus::pass) {
        row.flags.push_back("damage threshold " + row.damage);
    }

    const bool want_trajectory = options.want_trajectory || !config.trajectory_out.empty();
    double sigma = 0.0;
    double rate = mat.gamma_thz;

    if (config.drive == DriveMode::cw) {
        const CWDriveParams cw{complex(omega_0), complex(omega_0), mat.gamma_opt, mat.gamma_thz};
        sigma = std::abs(cw.sigma_max());
        rate = cw.gain_decay();
        if (config.coherence == CoherenceMethod::numeric || want_trajectory) {
            const PulseSpec p{PulseShape::flat_top, omega_0, 0.5 * config.duration, 0.5 * config.duration, 0.0};
            const auto relax = config.relaxation ? RelaxationSpec{mat.gamma_opt, mat.gamma_thz, 0.0, 0.0}
                                                 : RelaxationSpec::none();
            auto grid = pulse_grid(p, p, config.trajectory_samples);
            auto traj = evolve_full(p, p, relax, VSystemState::ground(), grid, options.integrator);
            if (config.coherence == CoherenceMethod::numeric) {
                sigma = detail::max_abs_sigma_cb(traj);
            }
            result.trajectory = std::move(traj);
        }
    } else {
        const PulseShape shape = config.drive == DriveMode::gaussian ? PulseShape::gaussian : PulseShape::flat_top;
        const PulseSpec p{shape, omega_0, config.duration, 0.0, 0.0};
        row.pulse_area = pulse_area(p);
        auto grid = pulse_grid(p, p, config.trajectory_samples);
        if (config.coherence == CoherenceMethod::numeric) {
            const auto relax = config.relaxation ? RelaxationSpec{mat.gamma_opt, mat.gamma_thz, 0.0, 0.0}
                                                 : RelaxationSpec::none();
            auto traj = evolve_full(p, p, relax, VSystemState::ground(), grid, options.integrator);
            sigma = detail::max_abs_sigma_cb(traj);
            result.trajectory = std::move(traj);
        } else {
            sigma = asymptotic_coherence(p);
            if (want_trajectory) {
                Trajectory traj;
                traj.times = grid;
                for (double t : grid) {
                    traj.states.push_back(detail::analytic_state(p, t));
                }
                result.trajectory = std::move(traj);
            }
        }
    }
    if (config.sigma_max) {
        sigma = *config.sigma_max;
        row.flags.push_back("sigma_max overridden");
    }
    row.sigma_max = sigma;
    row.decay_rate = rate;

    if (sigma > 0.0) {
        row.e_thz = exponential_source_energy(sigma, rate, mat, geom);
        row.peak_field = focused_field(row.e_thz, 1.0 / rate, config.spot);
    }

    row.e_opt_pulse = optical_pulse_energy(omega_0, config.duration, geom, mat);
    row.absorbed_fraction = absorbed_fraction(mat, geom);
    row.e_opt_total = config.pulses * row.e_opt_pulse / row.absorbed_fraction;
    row.efficiency = row.e_opt_total > 0.0 ? row.e_thz / row.e_opt_total : 0.0;
    row.efficiency_absorbed = row.e_opt_pulse > 0.0 ? row.e_thz / (config.pulses * row.e_opt_pulse) : 0.0;
    row.efficiency_limit = mat.omega_thz * mat.lambda_opt / (2.0 * constants::pi * constants::c);

    if ((options.want_waveform || !config.waveform_out.empty()) && rate > 0.0) {
        const auto grid = emission_time_grid(rate, mat, geom, config.waveform_samples);
        result.waveform = sample_exponential_source(sigma, rate, mat, geom, grid);
    }
    if (!want_trajectory) {
        result.trajectory.reset();
    }
    return result;
}

inline void write_trajectory(std::ostream& out, const Trajectory& traj)
{
    out << std::setprecision(9) << std::scientific;
    out << "time_s,rho_a,rho_b,rho_c,re_sigma_ba,im_sigma_ba,re_sigma_ca,im_sigma_ca,re_sigma_cb,im_sigma_cb\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        out << traj.times[i] << ',' << s.rho_a() << ',' << s.rho_b() << ',' << s.rho_c() << ','
            << s.sigma_ba().real() << ',' << s.sigma_ba().imag() << ',' << s.sigma_ca().real() << ','
            << s.sigma_ca().imag() << ',' << s.sigma_cb().real() << ',' << s.sigma_cb().imag() << '\n';
    }
    out << std::defaultfloat;
}

/// Writes the waveform/trajectory files named in the config.
inline void write_scenario_outputs(const ScenarioConfig& config, const ScenarioResult& result)
{
    auto open = [](const std::string& path) {
        std::ofstream f(path);
        if (!f) {
            throw ValidationError("cannot write '" + path + "'");
        }
        return f;
    };
    if (!config.waveform_out.empty() && result.waveform) {
        auto f = open(config.waveform_out);
        std::vector<std::string> notes{"scenario = " + config.label,
                                       "sigma_max = " + std::to_string(result.row.sigma_max),
                                       "decay_rate_s^-1 = " + std::to_string(result.row.decay_rate)};
        write_waveform(f, *result.waveform, notes);
    }
    if (!config.trajectory_out.empty() && result.trajectory) {
        auto f = open(config.trajectory_out);
        write_trajectory(f, *result.trajectory);
    }
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepSpec {
    std::string parameter;
    double min = 0.0;
    double max = 0.0;
    std::size_t steps = 1;
    unsigned jobs = 1;
};

inline std::vector<double> sweep_values(const SweepSpec& spec)
{
    detail::require(spec.steps >= 1, "sweep needs at least one step");
    std::vector<double> v(spec.steps);
    for (std::size_t i = 0; i < spec.steps; ++i) {
        v[i] = spec.steps == 1 ? spec.min
                               : spec.min + (spec.max - spec.min) * static_cast<double>(i) /
                                                static_cast<double>(spec.steps - 1);
    }
    return v;
}

/// Runs one scenario per parameter value. Failures are recorded in the row's
/// `error` field; rows come back in parameter order regardless of `jobs`.
inline std::vector<ReportRow> sweep(const ScenarioConfig& base, const SweepSpec& spec,
                                    const ScenarioOptions& options = {})
{
    if (!ScenarioConfig::parameter_dimension(spec.parameter)) {
        throw ValidationError("'" + spec.parameter + "' is not a numeric config parameter");
    }
    const auto values = sweep_values(spec);
    std::vector<ReportRow> rows(values.size());

    ScenarioOptions point_options = options;
    point_options.want_waveform = false;
    point_options.want_trajectory = false;

    auto run_point = [&](std::size_t i) {
        ScenarioConfig c = base;
        c.waveform_out.clear();
        c.trajectory_out.clear();
        c.label = base.label + "[" + std::to_string(i) + "]";
        try {
            c.set_parameter(spec.parameter, values[i]);
            rows[i] = run_scenario(c, point_options).row;
        } catch (const std::exception& e) {
            rows[i] = ReportRow{};
            rows[i].label = c.label;
            rows[i].error = e.what();
        }
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(values.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            run_point(i);
        }
    } else {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t i = w; i < values.size(); i += jobs) {
                    run_point(i);
                }
            });
        }
    }
    return rows;
}

} // namespace thzcoh
