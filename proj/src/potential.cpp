#include "scaledecay/potential.hpp"

#include <algorithm>
#include <cmath>

namespace scaledecay {

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
    case PotentialKind::delta: return "delta";
    case PotentialKind::square_barrier: return "square-barrier";
    case PotentialKind::generic: return "generic";
    }
    return "unknown";
}

RescaledPotential RescaledPotential::delta(double strength_V0bar, double abar) {
    if (!(strength_V0bar >= 0.0)) throw DomainError("delta potential: strength must be non-negative");
    if (!(abar > 0.0)) throw DomainError("delta potential: abar must be positive");
    RescaledPotential p;
    p.kind_ = PotentialKind::delta;
    p.evaluator_ = [](double) { return 0.0; };
    p.well_end_ = abar;
    p.support_end_ = abar;
    p.deltas_.push_back({abar, strength_V0bar});
    p.finalize();
    return p;
}

RescaledPotential RescaledPotential::square_barrier(double height_V0bar, double abar, double bbar) {
    if (!(abar > 0.0) || !(bbar > abar)) throw DomainError("square barrier: need 0 < abar < bbar");
    RescaledPotential p;
    p.kind_ = PotentialKind::square_barrier;
    p.evaluator_ = [=](double x) { return (x > abar && x < bbar) ? height_V0bar : 0.0; };
    p.well_end_ = abar;
    p.support_end_ = bbar;
    p.breakpoints_ = {abar};
    p.finalize();
    return p;
}

RescaledPotential RescaledPotential::generic(std::function<double(double)> evaluator, double well_end,
                                             double support_end, std::vector<double> breakpoints,
                                             std::vector<DeltaSite> deltas) {
    if (!evaluator) throw DomainError("generic potential: evaluator is empty");
    if (!(well_end > 0.0) || !(support_end >= well_end)) {
        throw DomainError("generic potential: need 0 < well_end <= support_end");
    }
    RescaledPotential p;
    p.kind_ = PotentialKind::generic;
    p.evaluator_ = std::move(evaluator);
    p.well_end_ = well_end;
    p.support_end_ = support_end;
    p.breakpoints_ = std::move(breakpoints);
    p.deltas_ = std::move(deltas);
    p.finalize();
    return p;
}

RescaledPotential RescaledPotential::from(const DeltaModel& model) {
    model.validate();
    return delta(model.strength_V0bar, model.abar);
}

RescaledPotential RescaledPotential::from(const BarrierModel& model) {
    model.validate();
    return square_barrier(model.height_V0bar, model.abar, model.bbar);
}

double RescaledPotential::value(double xbar) const {
    if (xbar > support_end_) return 0.0;
    return evaluator_(xbar);
}

void RescaledPotential::finalize() {
    for (const auto& d : deltas_) {
        if (!(d.position > 0.0) || d.position > support_end_) {
            throw DomainError("delta site must lie in (0, support_end]");
        }
        breakpoints_.push_back(d.position);
    }
    std::erase_if(breakpoints_, [&](double x) { return !(x > 0.0) || x >= support_end_; });
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());

    constexpr int kProbe = 4096;
    max_abs_ = 0.0;
    for (int i = 1; i <= kProbe; ++i) {
        const double v = evaluator_(support_end_ * (i - 0.5) / kProbe);
        if (!std::isfinite(v)) throw DomainError("potential evaluator is not finite on the support");
        max_abs_ = std::max(max_abs_, std::abs(v));
    }
}

} // namespace scaledecay
