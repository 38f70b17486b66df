#pragma once

#include "thzcoh/error.hpp"
#include "thzcoh/units.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string_view>

namespace thzcoh {

enum class PulseShape { gaussian, flat_top };

inline PulseShape parse_pulse_shape(std::string_view name)
{
    if (name == "gaussian") {
        return PulseShape::gaussian;
    }
    if (name == "flat_top") {
        return PulseShape::flat_top;
    }
    throw ValidationError("unknown pulse shape '" + std::string(name) + "'");
}

inline constexpr double kGaussianTruncation = 10.0;

/// Optical drive envelope in Rabi-frequency units.
///
/// Gaussian: Omega(t) = peak_rabi * exp(-(t - center)^2 / (2 width^2)), truncated
/// at |t - center| = 10 width. Flat top: Omega(t) = peak_rabi for
/// |t - center| <= width, zero elsewhere (full duration 2 width).
struct PulseSpec {
    PulseShape shape = PulseShape::gaussian;
    double peak_rabi = 0.0;  // rad/s
    double width = 1e-12;    // s
    double center = 0.0;     // s
    double detuning = 0.0;   // rad/s

    void validate() const
    {
        detail::require(std::isfinite(peak_rabi) && peak_rabi >= 0.0, "peak Rabi frequency must be >= 0");
        detail::require(std::isfinite(width) && width > 0.0, "pulse width must be > 0");
        detail::require(std::isfinite(center) && std::isfinite(detuning), "pulse timing must be finite");
    }

    double envelope(double t) const
    {
        const double x = t - center;
        switch (shape) {
        case PulseShape::gaussian:
            return peak_rabi * std::exp(-x * x / (2.0 * width * width));
        case PulseShape::flat_top:
            return std::abs(x) <= width ? peak_rabi : 0.0;
        }
        return 0.0;
    }

    /// Interval outside which the envelope is treated as zero.
    double window_start() const
    {
        return center - (shape == PulseShape::gaussian ? kGaussianTruncation : 1.0) * width;
    }
    double window_end() const
    {
        return center + (shape == PulseShape::gaussian ? kGaussianTruncation : 1.0) * width;
    }

    /// Closed-form integral of the envelope from -infinity to t.
    double cumulative_integral(double t) const
    {
        const double x = t - center;
        switch (shape) {
        case PulseShape::gaussian:
            return peak_rabi * width * std::sqrt(constants::pi / 2.0) *
                   (1.0 + std::erf(x / (std::numbers::sqrt2 * width)));
        case PulseShape::flat_top:
            if (x <= -width) {
                return 0.0;
            }
            return peak_rabi * (std::min(x, width) + width);
        }
        return 0.0;
    }
};

/// Pulse area S = 2*sqrt(2) * integral of Omega over the truncation window,
/// evaluated by adaptive Gauss-Kronrod quadrature. For a Gaussian this is
/// 4*sqrt(pi)*peak_rabi*width.
inline double pulse_area(const PulseSpec& pulse)
{
    pulse.validate();
    if (pulse.peak_rabi == 0.0) {
        return 0.0;
    }
    // Work in units of the width so the integrand is O(peak_rabi).
    auto f = [&](double u) { return pulse.envelope(pulse.center + u * pulse.width); };
    double error = 0.0;
    double integral = 0.0;
    if (pulse.shape == PulseShape::gaussian) {
        integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            f, -kGaussianTruncation, kGaussianTruncation, 15, 1e-13, &error);
    } else {
        integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, -1.0, 1.0, 0, 1e-13,
                                                                                  &error);
    }
    return 2.0 * std::numbers::sqrt2 * integral * pulse.width;
}

/// Peak Rabi frequency of a Gaussian with area S and the given width.
inline double gaussian_rabi_for_area(double area, double width)
{
    detail::require(area >= 0.0 && width > 0.0, "pulse area must be >= 0 and width > 0");
    return area / (4.0 * std::sqrt(constants::pi) * width);
}

/// Peak Rabi frequency of a flat-top pulse (duration 2 width) with area S.
inline double flat_top_rabi_for_area(double area, double width)
{
    detail::require(area >= 0.0 && width > 0.0, "pulse area must be >= 0 and width > 0");
    return area / (4.0 * std::numbers::sqrt2 * width);
}

} // namespace thzcoh
