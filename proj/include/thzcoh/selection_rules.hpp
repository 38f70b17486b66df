#pragma once

// Which V schemes between the R1 and R2 lines of ruby a given optical
// polarization can form, and how their two-photon couplings add up.
// Couplings are in units of C+ C-*, using C+ C-* = -C- C+*.

#include "thzcoh/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace thzcoh {

enum class Polarization { right_circular, left_circular, linear_perp };

inline Polarization parse_polarization(std::string_view name)
{
    if (name == "right_circular") {
        return Polarization::right_circular;
    }
    if (name == "left_circular") {
        return Polarization::left_circular;
    }
    if (name == "linear_perp") {
        return Polarization::linear_perp;
    }
    throw ValidationError("unsupported polarization '" + std::string(name) + "'");
}

struct PolarizationScheme {
    Polarization polarization = Polarization::linear_perp;
    /// Products of matrix elements for schemes A, B, C, D.
    std::array<double, 4> coupling_products{};

    double net() const
    {
        return coupling_products[0] + coupling_products[1] + coupling_products[2] + coupling_products[3];
    }
};

inline PolarizationScheme v_scheme_coupling(Polarization pol)
{
    switch (pol) {
    case Polarization::right_circular:
    case Polarization::left_circular:
        // A single circular component cannot close a V on both R lines.
        return {pol, {0.0, 0.0, 0.0, 0.0}};
    case Polarization::linear_perp: {
        const double ac = 4.0 / 9.0;
        const double bd = -2.0 * std::numbers::sqrt2 / 9.0;
        return {pol, {ac, bd, -ac, bd}};
    }
    }
    throw ValidationError("unsupported polarization");
}

} // namespace thzcoh
