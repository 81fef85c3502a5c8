#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "scaledecay/analytic_models.hpp"

namespace scaledecay {

enum class PotentialKind { delta, square_barrier, generic };

std::string_view to_string(PotentialKind kind);

/// A point interaction strength * delta(xbar - position).
struct DeltaSite {
    double position = 0.0;
    double strength = 0.0;
};

/// Static potential in the rescaled frame. There is always a hard wall at xbar = 0
/// (Phi(0) = 0), and Vbar vanishes beyond support_end.
class RescaledPotential {
public:
    static RescaledPotential delta(double strength_V0bar, double abar);
    static RescaledPotential square_barrier(double height_V0bar, double abar, double bbar);
    /// `evaluator` must be finite on (0, support_end]; `breakpoints` lists interior
    /// discontinuities of Vbar so the integrator can land on them exactly.
    static RescaledPotential generic(std::function<double(double)> evaluator, double well_end,
                                     double support_end, std::vector<double> breakpoints = {},
                                     std::vector<DeltaSite> deltas = {});

    static RescaledPotential from(const DeltaModel& model);
    static RescaledPotential from(const BarrierModel& model);

    PotentialKind kind() const noexcept { return kind_; }
    /// Right edge of the confining region (abar for both analytic models).
    double well_end() const noexcept { return well_end_; }
    double support_end() const noexcept { return support_end_; }

    /// Smooth part of Vbar at xbar (point interactions excluded).
    double value(double xbar) const;
    /// Largest |Vbar| of the smooth part, sampled on the support.
    double max_abs_value() const noexcept { return max_abs_; }

    std::span<const DeltaSite> deltas() const noexcept { return deltas_; }
    /// Sorted segment boundaries in (0, support_end): discontinuities and delta sites.
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }

private:
    RescaledPotential() = default;
    void finalize();

    PotentialKind kind_ = PotentialKind::generic;
    std::function<double(double)> evaluator_;
    double well_end_ = 0.0;
    double support_end_ = 0.0;
    double max_abs_ = 0.0;
    std::vector<DeltaSite> deltas_;
    std::vector<double> breakpoints_;
};

} // namespace scaledecay
