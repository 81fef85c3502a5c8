#include "scaledecay/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace scaledecay {

PiecewiseProfile PiecewiseProfile::delta(double strength, double abar) {
    PiecewiseProfile p;
    p.deltas.push_back({abar, strength});
    return p;
}

PiecewiseProfile PiecewiseProfile::square_barrier(double height, double abar, double bbar) {
    PiecewiseProfile p;
    p.layers.push_back({abar, bbar, height});
    return p;
}

double transfer_matrix_C2(const PiecewiseProfile& profile, const PhysicalConstants& consts, double kbar) {
    consts.validate();
    if (!(kbar > 0.0)) throw DomainError("transfer matrix: kbar must be positive");
    const double c = consts.two_m_over_hbar2();

    std::vector<double> events{0.0};
    for (const auto& l : profile.layers) {
        events.push_back(l.start);
        events.push_back(l.end);
    }
    for (const auto& d : profile.deltas) events.push_back(d.position);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    auto height_at = [&](double x) {
        double v = 0.0;
        for (const auto& l : profile.layers) {
            if (x >= l.start && x < l.end) v += l.height;
        }
        return v;
    };

    double y = 0.0;
    double dy = kbar;
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        const double d = events[i + 1] - events[i];
        const double q = kbar * kbar - c * height_at(0.5 * (events[i] + events[i + 1]));
        double m00, m01, m10;
        if (q > 0.0) {
            const double w = std::sqrt(q);
            m00 = std::cos(w * d);
            m01 = std::sin(w * d) / w;
            m10 = -w * std::sin(w * d);
        } else if (q < 0.0) {
            const double w = std::sqrt(-q);
            m00 = std::cosh(w * d);
            m01 = std::sinh(w * d) / w;
            m10 = w * std::sinh(w * d);
        } else {
            m00 = 1.0;
            m01 = d;
            m10 = 0.0;
        }
        const double ny = m00 * y + m01 * dy;
        const double ndy = m10 * y + m00 * dy;
        y = ny;
        dy = ndy;
        for (const auto& s : profile.deltas) {
            if (s.position == events[i + 1]) dy += c * s.strength * y;
        }
    }
    const double u = dy / kbar;
    return y * y + u * u;
}

} // namespace scaledecay
