#pragma once

// Long-pulse ("CW") THz coherence for two resonant drives with relaxation:
//
//   sigma_cb(t) = 2 O2 O1* exp(-G t) / (gamma_cb (gamma + (|O1|^2 + |O2|^2) / gamma_cb))
//   G           = 6 |O1|^2 / (gamma + (|O1|^2 + |O2|^2) / gamma_cb)
//
// The expression is evaluated as given. It agrees with the full master
// equation in the weak-drive regime; for strong drives it is an estimate only
// (the density matrix bounds |sigma_cb| by 1/2).

#include "thzcoh/density_matrix.hpp"
#include "thzcoh/error.hpp"

#include <cmath>
#include <complex>

namespace thzcoh {

struct CWDriveParams {
    complex rabi_1;          // rad/s
    complex rabi_2;          // rad/s
    double gamma_opt = 0.0;  // s^-1
    double gamma_thz = 0.0;  // s^-1

    void validate() const
    {
        detail::require(std::isfinite(std::abs(rabi_1)) && std::isfinite(std::abs(rabi_2)),
                        "Rabi frequencies must be finite");
        detail::require(gamma_opt > 0.0 && gamma_thz > 0.0, "CW coherence needs positive decay rates");
    }

    /// gamma + (|O1|^2 + |O2|^2) / gamma_cb
    double saturated_width() const
    {
        return gamma_opt + (std::norm(rabi_1) + std::norm(rabi_2)) / gamma_thz;
    }

    /// Decay rate G of the coherence under continuous driving.
    double gain_decay() const
    {
        validate();
        return 6.0 * std::norm(rabi_1) / saturated_width();
    }

    /// sigma_cb at t = 0: 2 O2 O1* / (gamma gamma_cb + |O1|^2 + |O2|^2).
    complex sigma_max() const
    {
        validate();
        return 2.0 * rabi_2 * std::conj(rabi_1) / (gamma_thz * saturated_width());
    }
};

inline complex cw_coherence(const CWDriveParams& params, double t)
{
    params.validate();
    return params.sigma_max() * std::exp(-params.gain_decay() * t);
}

} // namespace thzcoh
