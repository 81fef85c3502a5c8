#pragma once

// Numerical scattering-state engine for an arbitrary rescaled potential with a
// hard wall at xbar = 0 and compact support. Integrates the real stationary
// solution, extracts the exterior amplitude C(kbar), locates and fits the
// resonance minima of C^2, builds a confined initial state out of box-quantised
// scattering states, and turns a resonance into a survival curve.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "scaledecay/constants.hpp"
#include "scaledecay/potential.hpp"
#include "scaledecay/resonance.hpp"
#include "scaledecay/scaling_frame.hpp"

namespace scaledecay {

inline constexpr double kDefaultGridStep = 1e-3;

/// Real stationary solution normalised so that Phi(0) = 0, Phi'(0) = kbar
/// (sin(kbar xbar) for a free interior); beyond support_end it is C cos(kbar xbar + theta).
struct ScatteringState {
    double kbar = 0.0;
    double Ebar = 0.0;
    std::vector<double> xbar;             ///< integration grid on [0, support_end]
    std::vector<double> interior_samples; ///< Phi on xbar
    double C = 0.0;
    double theta = 0.0;                   ///< in (-pi, pi]
    double value_end = 0.0;               ///< Phi(support_end+)
    double slope_end = 0.0;               ///< Phi'(support_end+)
    int node_count = 0;                   ///< zeros of Phi in (0, support_end]
    /// Continuous Pruefer angle atan2(Phi, Phi'/kbar) at support_end (kbar xbar for a free state).
    double phase_end = 0.0;

    /// Phi at any xbar >= 0: interpolated inside the support, analytic outside.
    double evaluate(double xbar) const;
};

/// Integrates the stationary equation with a fixed-step Numerov scheme per smooth
/// segment; delta sites are inserted as exact derivative jumps.
/// Throws ResolutionError when grid_step gives fewer than 20 points per 1/kbar,
/// per evanescent length, or per segment.
ScatteringState integrate_state(const RescaledPotential& pot, const PhysicalConstants& consts, double kbar,
                                double grid_step = kDefaultGridStep);

struct C2Sample {
    double kbar = 0.0;
    double C2 = 0.0;
};

/// C^2 on `n_samples` evenly spaced wavenumbers in [kmin, kmax]. Samples are
/// independent; `threads` > 1 splits them over worker threads with identical results.
std::vector<C2Sample> scan_C2(const RescaledPotential& pot, const PhysicalConstants& consts, double kmin,
                              double kmax, int n_samples, double grid_step = kDefaultGridStep,
                              int threads = 1);

struct MinimumBracket {
    double lo = 0.0;
    double hi = 0.0;
    double kbar = 0.0; ///< refined argmin
    double C2 = 0.0;   ///< value at the refined argmin
};

/// Interior samples lower than both neighbours (by more than `min_depth` relative)
/// become brackets. With `refine`, each is polished by golden-section/parabolic search
/// to `rel_tol` in kbar; without it the three-point parabola vertex is returned.
std::vector<MinimumBracket> locate_minima(std::span<const C2Sample> scan,
                                          const std::function<double(double)>& refine = {},
                                          double rel_tol = 1e-10, double min_depth = 1e-9);

/// Parameters of G^2 (Delta + delta)^2 + F^2 fitted to samples of C^2(Ebar).
struct QuadraticFit {
    double F = 0.0;
    double G = 0.0;
    double delta_shift = 0.0;
    double residual = 0.0; ///< RMS misfit divided by F^2
};

/// Least-squares fit of the resonance model around `Ebar_anchor` (Delta = Ebar - Ebar_anchor).
/// Positivity of F and G is built in through the (log F^2, log G^2, delta) parameterisation.
QuadraticFit fit_quadratic_model(std::span<const double> Ebar, std::span<const double> C2, double Ebar_anchor);

struct FitOptions {
    double grid_step = kDefaultGridStep;
    int samples = 41;
    double residual_threshold = 1e-3;
    /// Expansion point kbar_n. Without it Ebar_n is the fitted minimum and delta = 0.
    std::optional<double> anchor_kbar;
    int index_n = 1;
};

struct ResonanceFit {
    Resonance resonance;
    double window_lo = 0.0; ///< energy interval actually sampled
    double window_hi = 0.0;
    double residual = 0.0;
    int samples_used = 0;
    double kbar_min = 0.0; ///< argmin of C^2
};

/// Estimated |F/G| around a refined minimum, used to size fit windows.
double estimate_halfwidth(const RescaledPotential& pot, const PhysicalConstants& consts, double kbar_min,
                          double grid_step = kDefaultGridStep);

/// Fits the resonance inside `bracket`. A non-positive `window_halfwidth` selects
/// one estimated |F/G| on each side of the minimum.
ResonanceFit fit_resonance(const RescaledPotential& pot, const PhysicalConstants& consts,
                           const MinimumBracket& bracket, double window_halfwidth, const FitOptions& options = {});

struct AssembledState {
    double box_length_R = 0.0;
    double well_end = 0.0;
    std::vector<double> weights;               ///< normalised c_j of each member
    std::vector<ScatteringState> member_states; ///< box eigenstates, Phi(R) = 0
    std::vector<double> member_norms;          ///< box norm of each member as integrated
    double confinement_leak = 0.0;             ///< probability in (target_end, R]
    double target_overlap = 0.0;               ///< |<phi_n|Phi>|^2
    double target_wavenumber = 0.0;
    double target_norm = 0.0;
    double target_decay = 0.0;                 ///< evanescent rate inside a barrier
    double target_end = 0.0;                   ///< target vanishes beyond this point
    std::vector<double> amplitudes;            ///< coefficient of each raw member profile

    /// Assembled Phi(xbar, 0) at any point of [0, R].
    double evaluate(double xbar) const;
    /// The confined target profile phi_n.
    double target(double xbar) const;
};

/// Superposes `n_members` box eigenstates (nodes at 0 and R) centred on the
/// resonance minimum, with weights given by their projections onto the confined
/// target sin(kbar_t xbar) on (0, abar), normalised. kbar_t is n pi/abar for a delta
/// wall and the resonance wavenumber otherwise. Inside a square barrier the target
/// continues as sin(kbar_t abar) exp(-q (xbar - abar)) up to bbar.
AssembledState assemble_confined_state(const RescaledPotential& pot, const PhysicalConstants& consts,
                                       const Resonance& resonance, double box_length_R, int n_members,
                                       double grid_step = kDefaultGridStep);

/// gamma(t) = 2|F/G| tau(t)/hbar and P = exp(-gamma) on the given times.
SurvivalCurve survival_curve(const Resonance& resonance, const ScaleLaw& law, std::span<const double> times,
                             const PhysicalConstants& consts = {});

} // namespace scaledecay
