#pragma once

// Closed-form resonance parameters and survival exponents for the two solvable
// scaling potentials: a delta wall at abar and a square barrier on (abar, bbar),
// both behind a hard wall at the origin.

#include <functional>
#include <string>
#include <vector>

#include "scaledecay/constants.hpp"
#include "scaledecay/resonance.hpp"
#include "scaledecay/scaling_frame.hpp"

namespace scaledecay {

/// Vbar(xbar) = V0bar delta(xbar - abar) in the rescaled frame.
struct DeltaModel {
    PhysicalConstants consts;
    double strength_V0bar = 0.0;
    double abar = 1.0;

    void validate() const;
    /// 2 m V0bar / hbar^2, the inverse length controlling the derivative jump.
    double jump() const { return consts.two_m_over_hbar2() * strength_V0bar; }
};

/// Vbar(xbar) = V0bar on (abar, bbar), zero beyond bbar.
struct BarrierModel {
    PhysicalConstants consts;
    double height_V0bar = 0.0;
    double abar = 1.0;
    double bbar = 2.0;

    void validate() const;
    /// Upper end of the under-barrier interval, sqrt(2 m V0bar)/hbar.
    double kbar_cut() const { return std::sqrt(consts.two_m_over_hbar2() * height_V0bar); }
    /// kbar' = sqrt(2 m V0bar / hbar^2 - kbar^2); DomainError above the barrier top.
    double kprime(double kbar) const;
};

/// A width (energy units) with the regime diagnostics that applied when it was evaluated.
struct WidthEstimate {
    double value = 0.0;
    std::vector<std::string> warnings;
};

// --- delta wall --------------------------------------------------------------

/// C^2(kbar) = sin^2(kbar abar) + [cos(kbar abar) + (2 m V0bar / hbar^2 kbar) sin(kbar abar)]^2.
double delta_C2(const DeltaModel& model, double kbar);

/// Leading-order resonance around kbar_n = n pi / abar (valid for 2 m V0bar / hbar^2 >> n pi / abar).
Resonance delta_resonance(const DeltaModel& model, int n);

/// gamma_n(t) = 2|F/G| tau(t) / hbar.
double delta_gamma(const DeltaModel& model, const ScaleLaw& law, int n, double t);

/// Static (v = 0) width hbar^6 (n pi)^3 / (2 m^3 a^4 (V0bar/L0)^2) with a = abar L0.
WidthEstimate delta_static_rate(const DeltaModel& model, const ScaleLaw& law, int n);

// --- square barrier ----------------------------------------------------------

double barrier_A(const BarrierModel& model, double kbar);
double barrier_B(const BarrierModel& model, double kbar);
double barrier_C2(const BarrierModel& model, double kbar);

/// All roots of A(kbar) in (0, kbar_cut), increasing.
std::vector<double> barrier_roots(const BarrierModel& model);

/// How dA/dE is evaluated at the root when expanding C^2 around it.
enum class BarrierExpansion {
    /// Full derivative of A, which carries the penetration length 1/kbar' next to abar.
    exact_slope,
    /// Only the abar-proportional part of dA/dE (the thick-well form of G^2 and delta).
    thick_well,
};

Resonance barrier_resonance(const BarrierModel& model, int n,
                            BarrierExpansion expansion = BarrierExpansion::exact_slope);

/// The closed-form width 8 hbar^2 k^3/(m abar) (k'/(k^2 + k'^2))^2 exp(-2 k'(bbar - abar))
/// evaluated at Ebar. Equals 2|F/G| of the thick-well expansion at a root.
double barrier_closed_form_width(const BarrierModel& model, double Ebar);

/// gamma_n(t) from barrier_closed_form_width at the n-th root.
double barrier_gamma(const BarrierModel& model, const ScaleLaw& law, int n, double t);

/// Static (v = 0), thick-barrier width 8 hbar^2 k^3/(m a k'^2) exp(-2 k'(b - a)) in lab units.
WidthEstimate barrier_static_rate(const BarrierModel& model, const ScaleLaw& law, int n);

// --- any scaling potential ---------------------------------------------------

/// gamma_n(t) = Gamma_n(Ebar_n) tau(t) / hbar for any static-frame width function.
double general_gamma(const std::function<double(double)>& static_rate_fn, const ScaleLaw& law,
                     const PhysicalConstants& consts, double Ebar_n, double t);

} // namespace scaledecay
