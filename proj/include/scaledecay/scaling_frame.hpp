#pragma once

// Exact map between the moving-potential problem V(x,t) = Vbar(x/L)/L^2 with
// L(t) = L0 + v t and the static problem in the rescaled frame
// (xbar, tau) = (x/L(t), t/(L0 L(t))).

#include <span>
#include <utility>
#include <vector>

#include "scaledecay/constants.hpp"

namespace scaledecay {

/// Linear scale law L(t) = L0 + v t. For v < 0 it is only valid on [0, L0/|v|).
class ScaleLaw {
public:
    ScaleLaw(double L0, double v);

    double L0() const noexcept { return L0_; }
    double v() const noexcept { return v_; }

    /// First time outside the validity window (infinity when v >= 0).
    double window_end() const noexcept;
    bool in_window(double t) const noexcept;

    /// Supremum of tau over the valid window: 1/(L0 v) for v > 0, infinity otherwise.
    double tau_limit() const noexcept;

private:
    double L0_;
    double v_;
};

/// L(t). Throws TimeOutOfWindow outside [0, window_end).
double scale_factor(const ScaleLaw& law, double t);

/// tau(t) = t/(L0 L(t)) = integral of ds/L(s)^2 from 0 to t.
double tau_of_t(const ScaleLaw& law, double t);

/// Inverse of tau_of_t on the valid window.
double t_of_tau(const ScaleLaw& law, double tau);

struct LabWaveSample {
    std::vector<double> x;
    double t = 0.0;
    std::vector<cplx> amplitude;

    void validate() const;
};

struct RescaledWaveSample {
    std::vector<double> xbar;
    double tau = 0.0;
    std::vector<cplx> amplitude;

    void validate() const;
};

/// Lifts a rescaled-frame sample to the lab frame at time t:
///   Psi(x,t) = L^{-1/2} exp(i m v x^2 / 2 hbar L) exp(-i Ebar (tau(t) - phi.tau)/hbar) phi(x/L).
/// For a stationary profile sampled at phi.tau = 0 this is the exact lab solution; for a
/// sample already evolved to tau(t) pass Ebar = 0. The result lives on x = L(t) xbar.
LabWaveSample lift_solution(const ScaleLaw& law, const PhysicalConstants& consts, double Ebar,
                            const RescaledWaveSample& phi, double t);

/// Inverse of lift_solution: maps a lab sample at psi.t back to the rescaled frame,
/// undoing the Jacobian, the gauge phase and the stationary phase. The result has tau = 0
/// when Ebar != 0 (a stationary profile) and tau = tau(psi.t) otherwise.
RescaledWaveSample to_rescaled(const ScaleLaw& law, const PhysicalConstants& consts, double Ebar,
                               const LabWaveSample& psi);

/// Pointwise linear combination. All samples must share grid and time.
LabWaveSample superpose(std::span<const std::pair<cplx, LabWaveSample>> states);

/// Trapezoid L^2 norm squared of a sampled wave function.
double norm_squared(std::span<const double> x, std::span<const cplx> amplitude);

/// Trapezoid <a|b> for samples on the same grid.
cplx inner_product(const LabWaveSample& a, const LabWaveSample& b);

} // namespace scaledecay
