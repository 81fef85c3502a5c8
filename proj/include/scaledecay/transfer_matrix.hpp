#pragma once

// Exterior amplitude of piecewise-constant potentials with point interactions,
// computed by multiplying exact 2x2 propagators for (Phi, Phi'). Independent of
// both the closed forms and the Numerov integrator; used to cross-check them.

#include <vector>

#include "scaledecay/constants.hpp"
#include "scaledecay/potential.hpp"

namespace scaledecay {

/// Vbar = height on [start, end).
struct Layer {
    double start = 0.0;
    double end = 0.0;
    double height = 0.0;
};

struct PiecewiseProfile {
    std::vector<Layer> layers;
    std::vector<DeltaSite> deltas;

    static PiecewiseProfile delta(double strength, double abar);
    static PiecewiseProfile square_barrier(double height, double abar, double bbar);
};

/// C^2 = Phi^2 + (Phi'/kbar)^2 past the last feature, starting from Phi(0) = 0, Phi'(0) = kbar.
double transfer_matrix_C2(const PiecewiseProfile& profile, const PhysicalConstants& consts, double kbar);

} // namespace scaledecay
