#pragma once

// Direct lab-frame solution of i hbar dPsi/dt = -hbar^2/2m Psi'' + Vbar(x/L)/L^2 Psi
// with a Crank-Nicolson (Cayley) step, a hard wall at x = 0 and either a hard wall
// or a polynomial absorbing layer at domain_end. Used to check the rescaled-frame
// survival predictions without relying on the scaling transformation.

#include <functional>
#include <vector>

#include "scaledecay/constants.hpp"
#include "scaledecay/potential.hpp"
#include "scaledecay/resonance.hpp"
#include "scaledecay/scaling_frame.hpp"

namespace scaledecay {

enum class Boundary { reflecting, absorbing };

struct EvolutionConfig {
    double domain_end = 0.0;
    int grid_points = 0;          ///< nodes on [0, domain_end], both walls included
    double time_step = 0.0;       ///< upper bound; steps are shrunk to land on output times
    double total_time = 0.0;
    Boundary boundary = Boundary::reflecting;
    double absorbing_fraction = 0.2;  ///< outer part of the domain covered by the layer
    double absorbing_strength = 1.0;  ///< peak of -i W(x), energy units, quadratic ramp
    int output_samples = 200;         ///< evenly spaced outputs when output_times is empty
    std::vector<double> output_times; ///< strictly increasing, in (0, total_time]
    int snapshot_every = 0;           ///< keep Psi at every k-th output (0: final state only)
    double norm_drift_bound = 1e-8;
    double boundary_band = 0.1;           ///< outer fraction watched for reflections
    double boundary_leak_threshold = 1e-3;
    bool strict = true;                   ///< throw on drift or boundary leak instead of reporting

    void validate() const;
    double grid_step() const { return domain_end / (grid_points - 1); }
};

struct OracleResult {
    SurvivalCurve curve;          ///< P(t) = in-well probability / initial in-well probability
    double norm_drift = 0.0;      ///< relative change of the total norm (reflecting runs)
    double leak_at_boundary = 0.0; ///< peak probability in the boundary band, or the absorbed fraction
    LabWaveSample final_state;
    std::vector<LabWaveSample> snapshots;
};

std::vector<double> oracle_grid(const EvolutionConfig& cfg);

/// Psi(x, 0) = L0^{-1/2} exp(i m v x^2 / 2 hbar L0) phi(x/L0) on `grid`. Without the
/// gauge phase the bare profile is returned, which is not an instantaneous eigenstate for v != 0.
LabWaveSample lifted_initial_state(const std::function<double(double)>& profile, const ScaleLaw& law,
                                   const PhysicalConstants& consts, const std::vector<double>& grid,
                                   bool gauge_phase = true);

/// Evolves psi0 (interpolated onto the oracle grid if needed) in the lab potential
/// Vbar(x/L)/L^2. Delta sites move as strength/L at position xbar L and are represented
/// by an interface-corrected rank-one coupling of the two nodes around them.
OracleResult evolve(const RescaledPotential& pot, const ScaleLaw& law, const PhysicalConstants& consts,
                    const LabWaveSample& psi0, const EvolutionConfig& cfg);

struct FrameConsistency {
    double max_P_discrepancy = 0.0;
    double max_amplitude_discrepancy = 0.0; ///< relative to max |Psi_lab| at each compared time
    OracleResult lab;
    OracleResult rescaled;
};

/// Runs the same initial profile once in the lab frame and once in the rescaled frame
/// (static potential, same node count and scaled step), then compares P(t) and the
/// lifted amplitude at the snapshot times.
FrameConsistency frame_consistency_check(const RescaledPotential& pot, const ScaleLaw& law,
                                         const PhysicalConstants& consts,
                                         const std::function<double(double)>& profile, EvolutionConfig cfg);

} // namespace scaledecay
