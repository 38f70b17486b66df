#pragma once

// SI constants and the conversions between the spectroscopist's units
// (cm^-1, cm^2, cm^-3, W/cm^2, ps) and the SI values used everywhere else.
//
// Quantities in text form look like "5.5 cm^-1" or "100 GW/cm^2". The unit is
// interpreted against an expected dimension: "cm^-1" is an angular rate when
// a linewidth is expected and an attenuation when a loss coefficient is.

#include "thzcoh/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thzcoh {

namespace constants {
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double pi = std::numbers::pi;
} // namespace constants

enum class Dimension {
    dimensionless,
    length,
    area,
    number_density,
    rate,          // s^-1 or rad/s; cm^-1 converts as 2*pi*c*nu
    attenuation,   // m^-1; cm^-1 converts as 100 m^-1
    time,
    energy,
    intensity,
};

inline std::string_view dimension_name(Dimension d)
{
    switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::length: return "length";
    case Dimension::area: return "area";
    case Dimension::number_density: return "number density";
    case Dimension::rate: return "rate";
    case Dimension::attenuation: return "attenuation";
    case Dimension::time: return "time";
    case Dimension::energy: return "energy";
    case Dimension::intensity: return "intensity";
    }
    return "unknown";
}

/// Spectroscopic wavenumber (cm^-1) to angular rate (rad/s): 2*pi*c*nu.
inline double wavenumber_to_angular_rate(double wavenumber_per_cm)
{
    detail::require(wavenumber_per_cm >= 0.0, "wavenumber must be non-negative");
    return 2.0 * constants::pi * constants::c * 100.0 * wavenumber_per_cm;
}

inline double angular_rate_to_wavenumber(double rate)
{
    detail::require(rate >= 0.0, "rate must be non-negative");
    return rate / (2.0 * constants::pi * constants::c * 100.0);
}

/// Vacuum wavelength of a transition given as a wavenumber in cm^-1.
inline double wavenumber_to_wavelength(double wavenumber_per_cm)
{
    detail::require(wavenumber_per_cm > 0.0, "wavenumber must be positive");
    return 0.01 / wavenumber_per_cm;
}

namespace detail {

struct UnitEntry {
    std::string_view symbol;
    Dimension dimension;
    double scale;
};

inline constexpr double kWavenumberRate = 2.0 * constants::pi * constants::c * 100.0;
inline constexpr double kTwoPi = 2.0 * constants::pi;

inline constexpr UnitEntry kUnits[] = {
    {"m", Dimension::length, 1.0},
    {"cm", Dimension::length, 1e-2},
    {"mm", Dimension::length, 1e-3},
    {"um", Dimension::length, 1e-6},
    {"nm", Dimension::length, 1e-9},

    {"m^2", Dimension::area, 1.0},
    {"cm^2", Dimension::area, 1e-4},
    {"mm^2", Dimension::area, 1e-6},
    {"um^2", Dimension::area, 1e-12},

    {"m^-3", Dimension::number_density, 1.0},
    {"cm^-3", Dimension::number_density, 1e6},

    {"s^-1", Dimension::rate, 1.0},
    {"rad/s", Dimension::rate, 1.0},
    {"ps^-1", Dimension::rate, 1e12},
    {"ns^-1", Dimension::rate, 1e9},
    {"cm^-1", Dimension::rate, kWavenumberRate},
    {"Hz", Dimension::rate, kTwoPi},
    {"GHz", Dimension::rate, kTwoPi * 1e9},
    {"THz", Dimension::rate, kTwoPi * 1e12},

    {"m^-1", Dimension::attenuation, 1.0},
    {"cm^-1", Dimension::attenuation, 1e2},

    {"s", Dimension::time, 1.0},
    {"ms", Dimension::time, 1e-3},
    {"us", Dimension::time, 1e-6},
    {"ns", Dimension::time, 1e-9},
    {"ps", Dimension::time, 1e-12},
    {"fs", Dimension::time, 1e-15},

    {"J", Dimension::energy, 1.0},
    {"mJ", Dimension::energy, 1e-3},
    {"uJ", Dimension::energy, 1e-6},
    {"nJ", Dimension::energy, 1e-9},
    {"pJ", Dimension::energy, 1e-12},
    {"fJ", Dimension::energy, 1e-15},

    {"W/m^2", Dimension::intensity, 1.0},
    {"W/cm^2", Dimension::intensity, 1e4},
    {"MW/cm^2", Dimension::intensity, 1e10},
    {"GW/cm^2", Dimension::intensity, 1e13},
    {"TW/cm^2", Dimension::intensity, 1e16},
};

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double parse_number(std::string_view text)
{
    text = trim(text);
    if (text == "inf" || text == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ValidationError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

} // namespace detail

/// SI scale factor of `unit` for the expected dimension.
inline double unit_scale(std::string_view unit, Dimension expected)
{
    unit = detail::trim(unit);
    if (expected == Dimension::dimensionless) {
        if (unit.empty() || unit == "1") {
            return 1.0;
        }
    }
    bool known = false;
    for (const auto& entry : detail::kUnits) {
        if (entry.symbol != unit) {
            continue;
        }
        known = true;
        if (entry.dimension == expected) {
            return entry.scale;
        }
    }
    if (!known) {
        throw ValidationError("unknown unit '" + std::string(unit) + "'");
    }
    throw ValidationError("unit '" + std::string(unit) + "' is not a " +
                          std::string(dimension_name(expected)));
}

/// Parses "<number> <unit>" into an SI value. A bare number is accepted only
/// for dimensionless quantities.
inline double parse_quantity(std::string_view text, Dimension expected)
{
    const auto trimmed = detail::trim(text);
    const auto split = trimmed.find_first_of(" \t");
    const auto number = trimmed.substr(0, split);
    const auto unit =
        split == std::string_view::npos ? std::string_view{} : detail::trim(trimmed.substr(split));
    if (unit.empty() && expected != Dimension::dimensionless) {
        throw ValidationError("quantity '" + std::string(trimmed) + "' needs a " +
                              std::string(dimension_name(expected)) + " unit");
    }
    return detail::parse_number(number) * unit_scale(unit, expected);
}

/// Canonical SI unit symbol used in reports.
inline std::string_view si_unit(Dimension d)
{
    switch (d) {
    case Dimension::dimensionless: return "";
    case Dimension::length: return "m";
    case Dimension::area: return "m^2";
    case Dimension::number_density: return "m^-3";
    case Dimension::rate: return "s^-1";
    case Dimension::attenuation: return "m^-1";
    case Dimension::time: return "s";
    case Dimension::energy: return "J";
    case Dimension::intensity: return "W/m^2";
    }
    return "";
}

} // namespace thzcoh
