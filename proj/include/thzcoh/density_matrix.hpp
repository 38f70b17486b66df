#pragma once

// Density matrix of the V system. Level order is a (ground), b, c; the two
// optical transitions are b<->a and c<->a, the THz transition is c<->b.
// Coherences are named by matrix element: sigma_ba = rho(b, a), etc.

#include "thzcoh/error.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace thzcoh {

using complex = std::complex<double>;
using DensityMatrix = Eigen::Matrix3cd;

namespace level {
inline constexpr int a = 0;
inline constexpr int b = 1;
inline constexpr int c = 2;
} // namespace level

inline constexpr double kStateTolerance = 1e-9;

class VSystemState {
public:
    VSystemState() : rho_(DensityMatrix::Zero()) { rho_(level::a, level::a) = 1.0; }

    explicit VSystemState(const DensityMatrix& rho) : rho_(rho) {}

    static VSystemState ground() { return VSystemState(); }

    const DensityMatrix& matrix() const { return rho_; }

    double rho_a() const { return rho_(level::a, level::a).real(); }
    double rho_b() const { return rho_(level::b, level::b).real(); }
    double rho_c() const { return rho_(level::c, level::c).real(); }

    complex sigma_ba() const { return rho_(level::b, level::a); }
    complex sigma_ca() const { return rho_(level::c, level::a); }
    complex sigma_cb() const { return rho_(level::c, level::b); }

    /// alpha = (sigma_ba + sigma_ca) / 2
    complex alpha() const { return 0.5 * (sigma_ba() + sigma_ca()); }
    /// beta = Re(sigma_cb)
    double beta() const { return sigma_cb().real(); }
    /// xi = alpha - alpha*
    complex xi() const { return alpha() - std::conj(alpha()); }

    double trace_error() const { return std::abs(rho_.trace() - complex(1.0)); }

    double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const
    {
        const DensityMatrix hermitian = 0.5 * (rho_ + rho_.adjoint());
        Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

    /// Throws ValidationError unless trace, Hermiticity and positivity hold
    /// to `tolerance`.
    void validate(double tolerance = kStateTolerance) const
    {
        if (!rho_.allFinite()) {
            throw ValidationError("density matrix has non-finite entries");
        }
        if (trace_error() > tolerance) {
            throw ValidationError("density matrix trace differs from 1 by " +
                                  std::to_string(trace_error()));
        }
        if (hermiticity_error() > tolerance) {
            throw ValidationError("density matrix is not Hermitian");
        }
        if (min_eigenvalue() < -tolerance) {
            throw ValidationError("density matrix is not positive semidefinite");
        }
    }

private:
    DensityMatrix rho_;
};

} // namespace thzcoh
