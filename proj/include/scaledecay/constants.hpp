#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "scaledecay/errors.hpp"

namespace scaledecay {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// hbar and m. Every formula keeps them symbolic; natural units are only the default.
struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const {
        if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
        if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
    }

    /// 2m/hbar^2, the factor converting energies into squared wavenumbers.
    double two_m_over_hbar2() const { return 2.0 * mass / (hbar * hbar); }

    double energy_of(double kbar) const { return hbar * hbar * kbar * kbar / (2.0 * mass); }

    double wavenumber_of(double Ebar) const { return std::sqrt(two_m_over_hbar2() * Ebar); }
};

} // namespace scaledecay
