#pragma once

// Spectroscopic material constants, crystal geometry, and the optical
// intensity/energy bookkeeping that links Rabi frequencies to laser pulses.
// Everything is SI; presets are loaded from unit-annotated text files.

#include "thzcoh/error.hpp"
#include "thzcoh/kv_file.hpp"
#include "thzcoh/units.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#ifndef THZCOH_DATA_DIR
#define THZCOH_DATA_DIR "data"
#endif

namespace thzcoh {

/// Laser damage threshold for pulses whose duration lies in [min_duration, max_duration].
/// Intensities between threshold_low and threshold_high are marginal.
struct DamageBucket {
    double min_duration = 0.0;
    double max_duration = 0.0;
    double threshold_low = 0.0;
    double threshold_high = 0.0;
};

struct MaterialParams {
    std::string name;
    std::string description;
    double lambda_opt = 0.0;     // m
    double n_opt = 1.0;
    double n_thz = 1.0;
    double gamma_opt = 0.0;      // s^-1
    double gamma_thz = 0.0;      // s^-1
    double sigma_abs_opt = 0.0;  // m^2
    double density = 0.0;        // m^-3
    double kappa_thz = 0.0;      // m^-1
    double omega_thz = 0.0;      // rad/s
    std::optional<double> gamma_thz_lt_ref;      // s^-1
    std::optional<double> sigma_abs_thz_lt_ref;  // m^2
    std::vector<DamageBucket> damage_threshold;

    /// Vacuum wavelength of the THz transition.
    double lambda_thz() const { return 2.0 * constants::pi * constants::c / omega_thz; }

    void validate() const
    {
        auto positive = [&](double v, const char* field) {
            detail::require(std::isfinite(v) && v > 0.0,
                            "material '" + name + "': " + field + " must be > 0");
        };
        positive(lambda_opt, "lambda_opt");
        positive(gamma_opt, "gamma_opt");
        positive(gamma_thz, "gamma_thz");
        positive(sigma_abs_opt, "sigma_abs_opt");
        positive(density, "density");
        positive(kappa_thz, "kappa_thz");
        positive(omega_thz, "omega_thz");
        detail::require(n_opt >= 1.0, "material '" + name + "': n_opt must be >= 1");
        detail::require(n_thz >= 1.0, "material '" + name + "': n_thz must be >= 1");
        if (gamma_thz_lt_ref) {
            positive(*gamma_thz_lt_ref, "gamma_thz_lt_ref");
        }
        if (sigma_abs_thz_lt_ref) {
            positive(*sigma_abs_thz_lt_ref, "sigma_abs_thz_lt_ref");
        }
        for (const auto& b : damage_threshold) {
            detail::require(b.min_duration > 0.0 && b.max_duration >= b.min_duration,
                            "material '" + name + "': bad damage duration range");
            detail::require(b.threshold_low > 0.0 && b.threshold_high >= b.threshold_low,
                            "material '" + name + "': bad damage threshold range");
        }
    }
};

struct CrystalGeometry {
    double length_thz = 0.0;  // L, m
    double area_thz = 0.0;    // A, m^2
    double area_opt = 0.0;    // A_opt, m^2
    double length_opt = 0.0;  // L_opt, m
    std::optional<double> aperture;  // D, m

    void validate() const
    {
        for (double v : {length_thz, area_thz, area_opt, length_opt}) {
            detail::require(std::isfinite(v) && v > 0.0, "crystal dimensions must be > 0");
        }
        if (aperture) {
            detail::require(std::isfinite(*aperture) && *aperture > 0.0, "aperture must be > 0");
        }
    }
};

/// Peak intensity of a pulse with peak Rabi frequency omega_0:
///   I = 2 pi hbar c omega_0^2 / (gamma n lambda sigma_abs).
inline double peak_intensity(double omega_0, const MaterialParams& mat)
{
    detail::require(omega_0 >= 0.0, "peak Rabi frequency must be >= 0");
    return 2.0 * constants::pi * constants::hbar * constants::c * omega_0 * omega_0 /
           (mat.gamma_opt * mat.n_opt * mat.lambda_opt * mat.sigma_abs_opt);
}

/// Inverse of peak_intensity.
inline double rabi_from_intensity(double intensity, const MaterialParams& mat)
{
    detail::require(intensity >= 0.0, "intensity must be >= 0");
    return std::sqrt(intensity / peak_intensity(1.0, mat));
}

/// Energy of one Gaussian pulse: peak intensity * sqrt(pi) * tau * A_opt.
inline double optical_pulse_energy(double omega_0, double tau, const CrystalGeometry& geom,
                                   const MaterialParams& mat)
{
    detail::require(tau > 0.0, "pulse duration must be > 0");
    return peak_intensity(omega_0, mat) * std::sqrt(constants::pi) * tau * geom.area_opt;
}

/// Inverse of optical_pulse_energy.
inline double rabi_from_pulse_energy(double energy, double tau, const CrystalGeometry& geom,
                                     const MaterialParams& mat)
{
    detail::require(energy >= 0.0, "pulse energy must be >= 0");
    return std::sqrt(energy / optical_pulse_energy(1.0, tau, geom, mat));
}

/// Fraction of incident optical energy absorbed over L_opt: 1 - exp(-sigma_abs N L_opt).
inline double absorbed_fraction(const MaterialParams& mat, const CrystalGeometry& geom)
{
    return -std::expm1(-mat.sigma_abs_opt * mat.density * geom.length_opt);
}

struct DipoleCoupling {
    double mu_squared = 0.0;  // C^2 m^2
    double eta = 0.0;         // s^-1 m^-1, source strength N gamma_LT sigma_LT
};

/// THz transition dipole from low-temperature linewidth and cross-section.
/// The Gaussian-unit relation mu^2 = gamma c hbar n3 sigma / (2 pi omega3) is
/// converted to SI with the factor 4 pi epsilon_0.
inline DipoleCoupling derived_dipole(const MaterialParams& mat)
{
    if (!mat.gamma_thz_lt_ref || !mat.sigma_abs_thz_lt_ref) {
        throw ValidationError("material '" + mat.name + "' lacks low-temperature THz reference values");
    }
    const double gamma_lt = *mat.gamma_thz_lt_ref;
    const double sigma_lt = *mat.sigma_abs_thz_lt_ref;
    DipoleCoupling out;
    out.mu_squared = 2.0 * constants::epsilon0 * gamma_lt * constants::c * constants::hbar * mat.n_thz *
                     sigma_lt / mat.omega_thz;
    out.eta = mat.density * gamma_lt * sigma_lt;
    return out;
}

enum class DamageStatus { pass, marginal, fail, unknown };

inline std::string_view damage_status_name(DamageStatus s)
{
    switch (s) {
    case DamageStatus::pass: return "pass";
    case DamageStatus::marginal: return "marginal";
    case DamageStatus::fail: return "fail";
    case DamageStatus::unknown: return "unknown";
    }
    return "unknown";
}

struct DamageAssessment {
    DamageStatus status = DamageStatus::unknown;
    /// Lower threshold over intensity; > 1 means below threshold.
    double margin = std::numeric_limits<double>::quiet_NaN();

    bool passed() const { return status == DamageStatus::pass; }
};

inline DamageAssessment damage_check(double intensity, double tau, const MaterialParams& mat)
{
    detail::require(intensity >= 0.0 && tau > 0.0, "damage check needs intensity >= 0 and duration > 0");
    if (intensity == 0.0) {
        return {DamageStatus::pass, std::numeric_limits<double>::infinity()};
    }
    detail::require(!mat.damage_threshold.empty(), "material '" + mat.name + "' has no damage thresholds");
    const auto it = std::find_if(mat.damage_threshold.begin(), mat.damage_threshold.end(),
                                 [&](const DamageBucket& b) {
                                     return tau >= b.min_duration && tau <= b.max_duration;
                                 });
    if (it == mat.damage_threshold.end()) {
        return {DamageStatus::unknown, std::numeric_limits<double>::quiet_NaN()};
    }
    const double margin = it->threshold_low / intensity;
    if (intensity < it->threshold_low) {
        return {DamageStatus::pass, margin};
    }
    if (intensity <= it->threshold_high) {
        return {DamageStatus::marginal, margin};
    }
    return {DamageStatus::fail, margin};
}

// ---------------------------------------------------------------------------
// Preset files

namespace detail {

inline std::pair<std::string_view, std::string_view> split_range(std::string_view text)
{
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        return {trim(text), trim(text)};
    }
    return {trim(text.substr(0, dots)), trim(text.substr(dots + 2))};
}

inline double parse_bound(std::string_view text, Dimension dim)
{
    if (text == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    return parse_quantity(text, dim);
}

inline DamageBucket parse_damage_bucket(std::string_view text)
{
    // "<tmin> .. <tmax> : <Ilow> [.. <Ihigh>]"
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ValidationError("damage_threshold '" + std::string(text) + "' needs 'durations : intensities'");
    }
    const auto [t0, t1] = split_range(text.substr(0, colon));
    const auto [i0, i1] = split_range(text.substr(colon + 1));
    return {parse_bound(t0, Dimension::time), parse_bound(t1, Dimension::time),
            parse_bound(i0, Dimension::intensity), parse_bound(i1, Dimension::intensity)};
}

} // namespace detail

inline MaterialParams material_from_kv(const KeyValueFile& kv)
{
    kv.check_keys({"name", "description", "lambda_opt", "n_opt", "n_thz", "gamma_opt", "gamma_thz",
                   "sigma_abs_opt", "density", "kappa_thz", "omega_thz", "gamma_thz_lt_ref",
                   "sigma_abs_thz_lt_ref", "damage_threshold"});
    MaterialParams m;
    m.name = kv.require("name");
    m.description = kv.get("description").value_or("");
    m.lambda_opt = kv.require_quantity("lambda_opt", Dimension::length);
    m.n_opt = kv.require_quantity("n_opt", Dimension::dimensionless);
    m.n_thz = kv.require_quantity("n_thz", Dimension::dimensionless);
    m.gamma_opt = kv.require_quantity("gamma_opt", Dimension::rate);
    m.gamma_thz = kv.require_quantity("gamma_thz", Dimension::rate);
    m.sigma_abs_opt = kv.require_quantity("sigma_abs_opt", Dimension::area);
    m.density = kv.require_quantity("density", Dimension::number_density);
    m.kappa_thz = kv.require_quantity("kappa_thz", Dimension::attenuation);
    m.omega_thz = kv.require_quantity("omega_thz", Dimension::rate);
    m.gamma_thz_lt_ref = kv.quantity("gamma_thz_lt_ref", Dimension::rate);
    m.sigma_abs_thz_lt_ref = kv.quantity("sigma_abs_thz_lt_ref", Dimension::area);
    for (const auto& text : kv.get_all("damage_threshold")) {
        try {
            m.damage_threshold.push_back(detail::parse_damage_bucket(text));
        } catch (const ValidationError& e) {
            throw ValidationError(kv.source() + ": " + e.what());
        }
    }
    m.validate();
    return m;
}

inline MaterialParams load_material(const std::filesystem::path& path)
{
    return material_from_kv(KeyValueFile::load(path.string()));
}

/// Root of the shipped data files; THZCOH_DATA_DIR in the environment overrides
/// the compiled-in default.
inline std::filesystem::path data_directory()
{
    if (const char* env = std::getenv("THZCOH_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return THZCOH_DATA_DIR;
}

inline std::filesystem::path materials_directory() { return data_directory() / "materials"; }

/// Preset files (*.mat) in the materials directory, sorted by file name.
inline std::vector<std::filesystem::path> list_material_files(
    const std::filesystem::path& dir = materials_directory())
{
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) {
        return files;
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".mat") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

/// Resolves a preset name ("ruby-rt") or a path to a material file.
inline MaterialParams find_material(const std::string& name_or_path,
                                    const std::filesystem::path& dir = materials_directory())
{
    const std::filesystem::path as_path(name_or_path);
    if (as_path.has_extension() && std::filesystem::exists(as_path)) {
        return load_material(as_path);
    }
    const auto candidate = dir / (name_or_path + ".mat");
    if (std::filesystem::exists(candidate)) {
        return load_material(candidate);
    }
    throw ValidationError("unknown material '" + name_or_path + "' (looked in " + dir.string() + ")");
}

} // namespace thzcoh
