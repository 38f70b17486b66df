#pragma once

// THz emission from the prepared coherence: phase matching, the slowly
// varying envelope equation for the THz Rabi frequency
//
//   dO3/dz + (n3/c) dO3/dt = i eta sigma_cb(z, t) - kappa O3,
//
// its closed form for an exponentially decaying side-pumped source, and the
// resulting pulse energies and field estimates.

#include "thzcoh/dynamics.hpp"
#include "thzcoh/error.hpp"
#include "thzcoh/materials.hpp"
#include "thzcoh/pulse.hpp"
#include "thzcoh/cw.hpp"
#include "thzcoh/units.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace thzcoh {

// ---------------------------------------------------------------------------
// Phase matching

/// exp(i x) sin(x) / x with x = delta_k L / 2.
inline complex phase_mismatch_factor(double delta_k, double length)
{
    detail::require(length > 0.0, "crystal length must be > 0");
    const double x = 0.5 * delta_k * length;
    const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return std::polar(sinc, x);
}

struct PhaseMatchGeometry {
    double k1 = 0.0;          // m^-1
    double k2 = 0.0;          // m^-1
    double k3 = 0.0;          // m^-1
    double phi = 0.0;         // rad, angle between the optical beams
    double phi_approx = 0.0;  // rad, sqrt((n3^2 - n1^2) / n1^2) * lambda1 / lambda3
    double theta_thz = 0.0;   // rad, angle between k1 and the THz direction
    double delta_k = 0.0;     // m^-1
};

/// Non-collinear CW phase matching k2 - k1 = k3 with omega2 = omega1 + omega3.
/// Both optical fields see n_opt, the THz field sees n_thz.
inline PhaseMatchGeometry cw_phase_match(const MaterialParams& mat, double lambda_opt, double lambda_thz)
{
    detail::require(lambda_opt > 0.0 && lambda_thz > 0.0, "wavelengths must be > 0");
    const double n1 = mat.n_opt;
    const double n3 = mat.n_thz;
    if (n3 < n1) {
        throw ValidationError("no real phase-matching angle: n_thz < n_opt");
    }
    const double two_pi = 2.0 * constants::pi;
    PhaseMatchGeometry g;
    g.k1 = two_pi * n1 / lambda_opt;
    g.k2 = two_pi * n1 * (1.0 / lambda_opt + 1.0 / lambda_thz);
    g.k3 = two_pi * n3 / lambda_thz;
    const double dk = g.k2 - g.k1;
    // sin^2(phi/2) from the law of cosines, free of the 1 - cos cancellation.
    double s2 = (g.k3 - dk) * (g.k3 + dk) / (4.0 * g.k1 * g.k2);
    if (s2 < 0.0 && s2 > -1e-14) {
        s2 = 0.0;  // collinear limit lost to rounding
    }
    if (s2 < 0.0 || s2 > 1.0) {
        throw ValidationError("no real phase-matching angle for these wavevectors");
    }
    g.phi = 2.0 * std::asin(std::sqrt(s2));
    g.phi_approx = std::sqrt((n3 * n3 - n1 * n1) / (n1 * n1)) * lambda_opt / lambda_thz;
    const double along = dk - 2.0 * g.k2 * s2;  // k2 cos(phi) - k1
    const double across = g.k2 * std::sin(g.phi);
    g.theta_thz = std::atan2(across, along);
    g.delta_k = 0.0;
    return g;
}

/// Beam tilt for the two-beam short-pulse geometry: lambda1 n3 / (lambda3 n1).
inline double pulsed_tilt_angle(const MaterialParams& mat, double lambda_opt, double lambda_thz)
{
    detail::require(lambda_opt > 0.0 && lambda_thz > 0.0, "wavelengths must be > 0");
    return lambda_opt * mat.n_thz / (lambda_thz * mat.n_opt);
}

/// THz diffraction loss of a beam through aperture D: lambda3 / D^2.
inline double diffraction_loss(double lambda_thz, double aperture)
{
    detail::require(lambda_thz > 0.0 && aperture > 0.0, "diffraction loss needs positive wavelength and aperture");
    return lambda_thz / (aperture * aperture);
}

// ---------------------------------------------------------------------------
// Two-beam grating in lowest order

struct GratingCoherence {
    complex value;
    /// Set when a pulse area exceeds kGratingAreaLimit.
    bool perturbative_warning = false;
};

inline constexpr double kGratingAreaLimit = 0.3;

/// sigma_cb(z, t) = 2 int^t dt' int^t' dt'' [O1'O1'' + O2'O2'' + (O1'O2'' + O1''O2') cos(2 k_z z)],
/// evaluated by nested adaptive quadrature.
inline GratingCoherence grating_coherence(const PulseSpec& drive_1, const PulseSpec& drive_2, double k_z,
                                          double z, double t)
{
    drive_1.validate();
    drive_2.validate();
    using boost::math::quadrature::gauss_kronrod;

    GratingCoherence out;
    out.perturbative_warning = pulse_area(drive_1) > kGratingAreaLimit || pulse_area(drive_2) > kGratingAreaLimit;

    const double start = std::min(drive_1.window_start(), drive_2.window_start());
    const double stop = std::min(t, std::max(drive_1.window_end(), drive_2.window_end()));
    if (stop <= start) {
        return out;
    }
    const double scale = std::min(drive_1.width, drive_2.width);
    const double u_max = (stop - start) / scale;
    auto at = [&](double u) { return start + u * scale; };

    auto cumulative = [&](const PulseSpec& p, double u) {
        if (u <= 0.0 || p.peak_rabi == 0.0) {
            return 0.0;
        }
        auto f = [&](double v) { return p.envelope(at(v)); };
        return gauss_kronrod<double, 31>::integrate(f, 0.0, u, 12, 1e-12) * scale;
    };
    const double cross = std::cos(2.0 * k_z * z);
    auto outer = [&](double u) {
        const double o1 = drive_1.envelope(at(u));
        const double o2 = drive_2.envelope(at(u));
        if (o1 == 0.0 && o2 == 0.0) {
            return 0.0;
        }
        const double c1 = cumulative(drive_1, u);
        const double c2 = cumulative(drive_2, u);
        return o1 * c1 + o2 * c2 + cross * (o1 * c2 + o2 * c1);
    };
    const double value = 2.0 * gauss_kronrod<double, 31>::integrate(outer, 0.0, u_max, 12, 1e-11) * scale;
    out.value = complex(value, 0.0);
    return out;
}

// ---------------------------------------------------------------------------
// Emission from an exponentially decaying, side-pumped source

namespace detail {

/// expm1(y) / y with the y -> 0 limit.
inline double exprel(double y)
{
    return y == 0.0 ? 1.0 : std::expm1(y) / y;
}

inline double emission_eta(const MaterialParams& mat) { return derived_dipole(mat).eta; }

} // namespace detail

/// O3(t, L) for sigma_cb(t) = sigma_max exp(-rate t), t > 0:
///   i eta sigma_max exp(-rate t) (exp(a c t' / n3) - 1) / a,  a = rate n3 / c - kappa,
/// with t' = min(t, L n3 / c). The a -> 0 pole is removable and handled by exprel.
inline complex exponential_source_field(double sigma_max, double rate, const MaterialParams& mat,
                                        const CrystalGeometry& geom, double t)
{
    if (t <= 0.0 || sigma_max == 0.0) {
        return {};
    }
    const double speed = constants::c / mat.n_thz;
    const double g = rate / speed;
    const double kappa = mat.kappa_thz;
    const double a = g - kappa;
    const double transit = geom.length_thz / speed;
    const double ell = std::min(speed * t, geom.length_thz);
    // exp(-rate t) (exp(a ell) - 1) / a, rewritten without growing exponentials.
    const double built = std::exp(-std::min(kappa, g) * ell) * ell * detail::exprel(-std::abs(a) * ell);
    const double tail = std::exp(-rate * std::max(0.0, t - transit));
    return complex(0.0, detail::emission_eta(mat) * sigma_max * built * tail);
}

/// Free-induction decay at the crystal exit for sigma_cb = sigma_max exp(-gamma_cb t).
inline complex fid_thz_field(double sigma_max, const MaterialParams& mat, const CrystalGeometry& geom, double t)
{
    detail::require(sigma_max >= 0.0 && sigma_max <= 1.0, "sigma_max must lie in [0, 1]");
    mat.validate();
    geom.validate();
    return exponential_source_field(sigma_max, mat.gamma_thz, mat, geom, t);
}

/// Integral of |O3|^2 dt divided by (eta sigma_max)^2 for an exponential
/// source decaying at `rate`:
///   1/(2 k r (k + g)) - e^{-2kL}/(2 k r (g - k)) + e^{-(k+g)L}/(r (g^2 - k^2)),
/// g = rate n3 / c. Near g = k the last two terms are replaced by their series.
inline double emission_bracket(double rate, double kappa, double length, double n_thz)
{
    detail::require(rate > 0.0 && kappa > 0.0 && length > 0.0, "emission bracket needs positive rate, loss and length");
    const double g = rate * n_thz / constants::c;
    const double a = g - kappa;
    const double u = kappa + g;
    const double first = 1.0 / (2.0 * kappa * rate * u);
    // h(g) = e^{-uL}/u - e^{-2kL}/(2k); the remaining terms are h / (a rate).
    double h_over_a = 0.0;
    if (std::abs(a) < 1e-6 * std::max(g, kappa)) {
        // h vanishes at g = k: first two Taylor terms of h / a.
        const double u0 = 2.0 * kappa;
        const double e = std::exp(-u0 * length);
        const double h1 = -e * (length / u0 + 1.0 / (u0 * u0));
        const double h2 = e * (length * length / u0 + 2.0 * length / (u0 * u0) + 2.0 / (u0 * u0 * u0));
        h_over_a = h1 + 0.5 * h2 * a;
    } else {
        const double h = std::exp(-u * length) / u - std::exp(-2.0 * kappa * length) / (2.0 * kappa);
        h_over_a = h / a;
    }
    return first + h_over_a / rate;
}

namespace detail {

/// hbar omega3 A N^2 gamma_LT sigma_LT / n3
inline double emission_prefactor(const MaterialParams& mat, const CrystalGeometry& geom)
{
    if (!mat.gamma_thz_lt_ref || !mat.sigma_abs_thz_lt_ref) {
        throw ValidationError("material '" + mat.name + "' lacks low-temperature THz reference values");
    }
    return constants::hbar * mat.omega_thz * geom.area_thz * mat.density * mat.density *
           *mat.gamma_thz_lt_ref * *mat.sigma_abs_thz_lt_ref / mat.n_thz;
}

/// hbar omega3 A / (gamma_LT n3 sigma_LT): converts integral |O3|^2 dt into joules.
inline double energy_per_rabi_squared(const MaterialParams& mat, double area)
{
    if (!mat.gamma_thz_lt_ref || !mat.sigma_abs_thz_lt_ref) {
        throw ValidationError("material '" + mat.name + "' lacks low-temperature THz reference values");
    }
    return constants::hbar * mat.omega_thz * area / (*mat.gamma_thz_lt_ref * mat.n_thz * *mat.sigma_abs_thz_lt_ref);
}

} // namespace detail

/// THz pulse energy for a source decaying at `rate` with initial coherence sigma_max.
inline double exponential_source_energy(double sigma_max, double rate, const MaterialParams& mat,
                                        const CrystalGeometry& geom)
{
    if (sigma_max == 0.0) {
        return 0.0;
    }
    return detail::emission_prefactor(mat, geom) * sigma_max * sigma_max *
           emission_bracket(rate, mat.kappa_thz, geom.length_thz, mat.n_thz);
}

/// Energy of the free-induction THz pulse (source decays at gamma_cb).
inline double thz_energy_fid(double sigma_max, const MaterialParams& mat, const CrystalGeometry& geom)
{
    detail::require(sigma_max >= 0.0 && sigma_max <= 1.0, "sigma_max must lie in [0, 1]");
    mat.validate();
    geom.validate();
    return exponential_source_energy(sigma_max, mat.gamma_thz, mat, geom);
}

/// Energy of the THz pulse under long-pulse driving (source decays at G).
inline double thz_energy_cw(const CWDriveParams& params, const MaterialParams& mat, const CrystalGeometry& geom)
{
    mat.validate();
    geom.validate();
    const double sigma = std::abs(params.sigma_max());
    if (sigma == 0.0) {
        return 0.0;
    }
    const double rate = params.gain_decay();
    detail::require(rate > 0.0, "CW emission needs a positive decay rate G");
    return exponential_source_energy(sigma, rate, mat, geom);
}

/// Peak free-space field of a pulse of `energy` focused to a square spot of
/// side `spot`, flat in time over `duration`: sqrt(2 I / (epsilon0 c)).
inline double focused_field(double energy, double duration, double spot)
{
    detail::require(energy >= 0.0, "energy must be >= 0");
    detail::require(duration > 0.0 && spot > 0.0, "duration and spot size must be > 0");
    const double intensity = energy / (duration * spot * spot);
    return std::sqrt(2.0 * intensity / (constants::epsilon0 * constants::c));
}

// ---------------------------------------------------------------------------
// Sampled waveforms

/// THz Rabi frequency sampled at the crystal exit.
struct THzWaveform {
    std::vector<double> t_samples;
    std::vector<complex> rabi_samples;
    MaterialParams material;
    double area = 0.0;  // emitting cross-section, m^2

    void validate() const
    {
        detail::require(t_samples.size() == rabi_samples.size(), "waveform sample count mismatch");
        validate_time_grid(t_samples);
        for (const auto& r : rabi_samples) {
            detail::require(std::isfinite(r.real()) && std::isfinite(r.imag()), "waveform has non-finite samples");
        }
    }

    /// Field amplitude hbar |O3| / mu_cb in V/m.
    double field(std::size_t i) const
    {
        const double mu = std::sqrt(derived_dipole(material).mu_squared);
        return constants::hbar * std::abs(rabi_samples.at(i)) / mu;
    }

    /// hbar omega3 A / (gamma_LT n3 sigma_LT) * integral |O3|^2 dt (trapezoid).
    double energy() const
    {
        validate();
        double integral = 0.0;
        for (std::size_t i = 1; i < t_samples.size(); ++i) {
            integral += 0.5 * (std::norm(rabi_samples[i]) + std::norm(rabi_samples[i - 1])) *
                        (t_samples[i] - t_samples[i - 1]);
        }
        return detail::energy_per_rabi_squared(material, area) * integral;
    }
};

/// Output grid resolving an exponential source decaying at `rate`: dense
/// over the first 20/rate, then up to the transit time, then a 40/rate tail.
inline std::vector<double> emission_time_grid(double rate, const MaterialParams& mat, const CrystalGeometry& geom,
                                              std::size_t samples_per_segment)
{
    detail::require(rate > 0.0 && samples_per_segment >= 2, "emission grid needs rate > 0 and >= 2 samples");
    const double transit = geom.length_thz * mat.n_thz / constants::c;
    std::vector<double> knots{0.0};
    const double early = std::min(transit, 20.0 / rate);
    knots.push_back(early);
    if (transit > early) {
        knots.push_back(transit);
    }
    knots.push_back(knots.back() + 40.0 / rate);

    std::vector<double> grid{0.0};
    for (std::size_t k = 1; k < knots.size(); ++k) {
        for (std::size_t i = 1; i < samples_per_segment; ++i) {
            grid.push_back(knots[k - 1] + (knots[k] - knots[k - 1]) * static_cast<double>(i) /
                                              static_cast<double>(samples_per_segment - 1));
        }
    }
    return grid;
}

/// Samples the closed-form exponential-source field on `t_grid`.
inline THzWaveform sample_exponential_source(double sigma_max, double rate, const MaterialParams& mat,
                                             const CrystalGeometry& geom, std::span<const double> t_grid)
{
    THzWaveform w;
    w.material = mat;
    w.area = geom.area_thz;
    w.t_samples.assign(t_grid.begin(), t_grid.end());
    w.rabi_samples.reserve(t_grid.size());
    for (double t : t_grid) {
        w.rabi_samples.push_back(exponential_source_field(sigma_max, rate, mat, geom, t));
    }
    w.validate();
    return w;
}

using CoherenceSource = std::function<complex(double z, double t)>;

struct PropagationOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;  // on the dimensionless retarded integral / L
    unsigned max_depth = 15;
};

/// Retarded integral at z = L along the THz characteristics:
///   O3(t, L) = i eta int_{z0}^{L} sigma_cb(z', t - (L - z') n3 / c) exp(-kappa (L - z')) dz',
///   z0 = max(0, L - t c / n3).
/// The source is taken to start at t = 0. Throws NumericalError when the
/// adaptive quadrature cannot resolve the source.
inline THzWaveform propagate_thz_numeric(const CoherenceSource& sigma_cb, const MaterialParams& mat,
                                         const CrystalGeometry& geom, std::span<const double> t_grid,
                                         const PropagationOptions& options = {})
{
    mat.validate();
    geom.validate();
    validate_time_grid(t_grid);
    using boost::math::quadrature::gauss_kronrod;

    const double eta = detail::emission_eta(mat);
    const double speed = constants::c / mat.n_thz;
    const double length = geom.length_thz;

    THzWaveform w;
    w.material = mat;
    w.area = geom.area_thz;
    w.t_samples.assign(t_grid.begin(), t_grid.end());
    w.rabi_samples.reserve(t_grid.size());

    for (double t : t_grid) {
        const double z0 = std::max(0.0, length - t * speed);
        if (t <= 0.0 || z0 >= length) {
            w.rabi_samples.emplace_back();
            continue;
        }
        // Integrate in the normalized coordinate s = (L - z') / L.
        const double s_max = (length - z0) / length;
        auto integrand = [&](double s, bool imag) {
            const double back = s * length;
            const complex v = sigma_cb(length - back, t - back / speed) * std::exp(-mat.kappa_thz * back);
            return imag ? v.imag() : v.real();
        };
        double err_re = 0.0;
        double err_im = 0.0;
        double l1_re = 0.0;
        double l1_im = 0.0;
        const double re = gauss_kronrod<double, 31>::integrate(
            [&](double s) { return integrand(s, false); }, 0.0, s_max, options.max_depth, options.rel_tol,
            &err_re, &l1_re);
        const double im = gauss_kronrod<double, 31>::integrate(
            [&](double s) { return integrand(s, true); }, 0.0, s_max, options.max_depth, options.rel_tol,
            &err_im, &l1_im);
        const double budget = options.rel_tol * 1e3 * std::max(l1_re + l1_im, 0.0) + options.abs_tol;
        if (!std::isfinite(re) || !std::isfinite(im) || err_re + err_im > budget) {
            throw NumericalError("THz propagation: source undersampled at t = " + std::to_string(t) + " s");
        }
        // i eta L (re + i im)
        w.rabi_samples.emplace_back(-eta * length * im, eta * length * re);
    }
    return w;
}

/// Side-pumped source sigma_cb(t) = sigma_max exp(-rate t) for t >= 0.
inline CoherenceSource exponential_source(double sigma_max, double rate)
{
    return [=](double, double t) { return t < 0.0 ? complex{} : complex(sigma_max * std::exp(-rate * t), 0.0); };
}

/// Side-pumped source interpolated linearly from sampled sigma_cb(t), zero
/// before the first sample and held at the last value afterwards.
inline CoherenceSource interpolated_source(std::vector<double> times, std::vector<complex> values)
{
    detail::require(times.size() == values.size() && !times.empty(), "interpolated source needs matching samples");
    validate_time_grid(times);
    return [times = std::move(times), values = std::move(values)](double, double t) -> complex {
        if (t < times.front()) {
            return {};
        }
        if (t >= times.back()) {
            return values.back();
        }
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        const auto i = static_cast<std::size_t>(it - times.begin());
        const double f = (t - times[i - 1]) / (times[i] - times[i - 1]);
        return values[i - 1] + f * (values[i] - values[i - 1]);
    };
}

/// Writes a waveform as comma-separated columns
/// time_s, re_rabi, im_rabi, field_V_per_m after `#` header lines.
inline void write_waveform(std::ostream& out, const THzWaveform& w, std::span<const std::string> notes = {})
{
    w.validate();
    out << "# material = " << w.material.name << "\n";
    out << std::setprecision(9) << std::scientific;
    out << "# n_thz = " << w.material.n_thz << ", kappa_thz_m^-1 = " << w.material.kappa_thz
        << ", gamma_thz_s^-1 = " << w.material.gamma_thz << ", area_m^2 = " << w.area << "\n";
    for (const auto& note : notes) {
        out << "# " << note << "\n";
    }
    out << "time_s,re_rabi,im_rabi,field_V_per_m\n";
    for (std::size_t i = 0; i < w.t_samples.size(); ++i) {
        out << w.t_samples[i] << ',' << w.rabi_samples[i].real() << ',' << w.rabi_samples[i].imag() << ','
            << w.field(i) << '\n';
    }
    out << std::defaultfloat;
}

} // namespace thzcoh
