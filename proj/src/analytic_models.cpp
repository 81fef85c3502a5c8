#include "scaledecay/analytic_models.hpp"

#include <cmath>
#include <sstream>

#include "scaledecay/numerics.hpp"

namespace scaledecay {
namespace {

// Below this ratio of 2 m V0bar / hbar^2 to kbar_n the delta expansion is flagged.
constexpr double kDeltaRegimeRatio = 10.0;
// Below this ratio of kbar' to kbar the thick-barrier static width is flagged.
constexpr double kBarrierRegimeRatio = 3.0;

void require_positive_k(double kbar) {
    if (!(kbar > 0.0) || !std::isfinite(kbar)) throw DomainError("kbar must be positive");
}

void require_index(int n) {
    if (n < 1) throw DomainError("resonance index must be >= 1");
}

std::string describe_ratio(const char* what, double ratio, double required) {
    std::ostringstream os;
    os << what << " = " << ratio << " is not >> 1 (advisory threshold " << required
       << "); the leading-order expansion may be inaccurate";
    return os.str();
}

// 2|F/G| of the delta expansion as a function of the expansion wavenumber.
double delta_width_at(const DeltaModel& model, double kbar) {
    const auto& c = model.consts;
    const double ratio = model.jump() / kbar;
    return 2.0 * c.hbar * c.hbar * kbar / (c.mass * model.abar) / (1.0 + ratio * ratio);
}

} // namespace

void DeltaModel::validate() const {
    consts.validate();
    if (!(strength_V0bar > 0.0)) throw DomainError("DeltaModel: strength_V0bar must be positive");
    if (!(abar > 0.0)) throw DomainError("DeltaModel: abar must be positive");
}

void BarrierModel::validate() const {
    consts.validate();
    if (!(height_V0bar > 0.0)) throw DomainError("BarrierModel: height_V0bar must be positive");
    if (!(abar > 0.0) || !(bbar > abar)) throw DomainError("BarrierModel: need 0 < abar < bbar");
}

double BarrierModel::kprime(double kbar) const {
    require_positive_k(kbar);
    const double q2 = consts.two_m_over_hbar2() * height_V0bar - kbar * kbar;
    if (!(q2 > 0.0)) throw DomainError("kbar at or above the barrier top: kbar' is not real");
    return std::sqrt(q2);
}

// --- delta ---------------------------------------------------------------------

double delta_C2(const DeltaModel& model, double kbar) {
    require_positive_k(kbar);
    model.consts.validate();
    const double s = std::sin(kbar * model.abar);
    const double c = std::cos(kbar * model.abar);
    const double outer = c + model.jump() / kbar * s;
    return s * s + outer * outer;
}

Resonance delta_resonance(const DeltaModel& model, int n) {
    model.validate();
    require_index(n);
    const auto& c = model.consts;
    const double kn = n * pi / model.abar;
    const double ratio = model.jump() / kn;
    const double enhancement = 1.0 + ratio * ratio;
    const double slope = c.mass * model.abar / (c.hbar * c.hbar * kn);

    Resonance r;
    r.index_n = n;
    r.kbar_n = kn;
    r.Ebar_n = c.energy_of(kn);
    r.F = std::sqrt(1.0 / enhancement);
    r.G = slope * std::sqrt(enhancement);
    r.delta_shift = 2.0 * model.strength_V0bar / model.abar / enhancement;
    r.C2_min = r.F * r.F;
    r.origin = Provenance::analytic;
    if (ratio < kDeltaRegimeRatio) r.warnings.push_back(describe_ratio("2 m V0bar / (hbar^2 kbar_n)", ratio, kDeltaRegimeRatio));
    return r;
}

double delta_gamma(const DeltaModel& model, const ScaleLaw& law, int n, double t) {
    const Resonance r = delta_resonance(model, n);
    return general_gamma([&](double Ebar) { return delta_width_at(model, model.consts.wavenumber_of(Ebar)); },
                         law, model.consts, r.Ebar_n, t);
}

WidthEstimate delta_static_rate(const DeltaModel& model, const ScaleLaw& law, int n) {
    model.validate();
    require_index(n);
    const auto& c = model.consts;
    const double a = model.abar * law.L0();
    const double lab_strength = model.strength_V0bar / law.L0();
    const double npi = n * pi;
    WidthEstimate out;
    out.value = std::pow(c.hbar, 6) * npi * npi * npi /
                (2.0 * std::pow(c.mass, 3) * std::pow(a, 4) * lab_strength * lab_strength);
    const double ratio = model.jump() / (npi / model.abar);
    if (ratio < kDeltaRegimeRatio) out.warnings.push_back(describe_ratio("2 m V0bar / (hbar^2 kbar_n)", ratio, kDeltaRegimeRatio));
    return out;
}

// --- square barrier ----------------------------------------------------------

double barrier_A(const BarrierModel& model, double kbar) {
    const double q = model.kprime(kbar);
    const double ka = kbar * model.abar;
    return 0.5 * std::exp(-q * model.abar) * (std::sin(ka) + kbar / q * std::cos(ka));
}

double barrier_B(const BarrierModel& model, double kbar) {
    const double q = model.kprime(kbar);
    const double ka = kbar * model.abar;
    return 0.5 * std::exp(q * model.abar) * (std::sin(ka) - kbar / q * std::cos(ka));
}

double barrier_C2(const BarrierModel& model, double kbar) {
    const double q = model.kprime(kbar);
    const double A = barrier_A(model, kbar);
    const double B = barrier_B(model, kbar);
    const double r = q * q / (kbar * kbar);
    const double grow = std::exp(2.0 * q * model.bbar);
    return (1.0 + r) * grow * A * A + 2.0 * (1.0 - r) * A * B + (1.0 + r) / grow * B * B;
}

std::vector<double> barrier_roots(const BarrierModel& model) {
    model.validate();
    constexpr int kScanSamples = 10000;
    const double cut = model.kbar_cut();
    // kbar' * [sin + (k/k') cos] has the sign of A and no singularity at the top.
    auto scaled = [&](double k) {
        const double q = model.kprime(k);
        return q * std::sin(k * model.abar) + k * std::cos(k * model.abar);
    };
    std::vector<double> roots;
    double k_prev = cut / kScanSamples;
    double f_prev = scaled(k_prev);
    for (int i = 2; i < kScanSamples; ++i) {
        const double k = cut * i / kScanSamples;
        const double f = scaled(k);
        if (f_prev == 0.0) {
            roots.push_back(k_prev);
        } else if ((f > 0.0) != (f_prev > 0.0) && f != 0.0) {
            roots.push_back(numerics::bisect(scaled, k_prev, k, 1e-15 * k, 400));
        }
        k_prev = k;
        f_prev = f;
    }
    return roots;
}

Resonance barrier_resonance(const BarrierModel& model, int n, BarrierExpansion expansion) {
    model.validate();
    require_index(n);
    const auto roots = barrier_roots(model);
    if (static_cast<std::size_t>(n) > roots.size()) {
        throw NoSuchResonance("barrier has " + std::to_string(roots.size()) +
                              " under-barrier roots; resonance " + std::to_string(n) + " requested");
    }
    const auto& c = model.consts;
    const double k = roots[static_cast<std::size_t>(n) - 1];
    const double q = model.kprime(k);
    const double a = model.abar;
    const double s = std::sin(k * a);
    const double co = std::cos(k * a);
    const double thickness = model.bbar - model.abar;

    Resonance r;
    r.index_n = n;
    r.kbar_n = k;
    r.Ebar_n = c.energy_of(k);
    r.kprime_n = q;
    r.origin = Provenance::analytic;

    const double F2 = std::pow(s - k / q * co, 2) * std::exp(-2.0 * q * thickness) / (1.0 + k * k / (q * q));
    r.F = std::sqrt(F2);

    if (expansion == BarrierExpansion::thick_well) {
        const double slope = c.mass * a / (c.hbar * c.hbar * k);
        const double G2 = 0.25 * slope * slope * (1.0 + q * q / (k * k)) * std::pow(co - k / q * s, 2) *
                          std::exp(2.0 * q * thickness);
        r.G = std::sqrt(G2);
        r.delta_shift = (c.hbar * c.hbar * k / (c.mass * a)) * ((k * k - q * q) / (k * k + q * q)) *
                        ((q * s - k * co) / (q * co - k * s)) * std::exp(-2.0 * q * thickness);
    } else {
        // C^2 ~ (1+r) e^{2 q b} A'^2 Delta^2 + 2 (1-r) A' B Delta + (1+r) e^{-2 q b} B^2
        // with A' = dA/dE at the root, B frozen at the root and r = q^2/k^2.
        const double bracket = s + k / q * co;
        const double dbracket_dk = a * co - a * k / q * s + co * (1.0 / q + k * k / (q * q * q));
        const double dq_dk = -k / q;
        const double dA_dk = 0.5 * std::exp(-q * a) * (dbracket_dk - a * dq_dk * bracket);
        const double dA_dE = dA_dk * c.mass / (c.hbar * c.hbar * k);
        const double B = barrier_B(model, k);
        const double ratio = q * q / (k * k);
        r.G = std::sqrt((1.0 + ratio) * std::exp(2.0 * q * model.bbar)) * std::abs(dA_dE);
        r.delta_shift = (1.0 - ratio) * B * std::exp(-2.0 * q * model.bbar) / ((1.0 + ratio) * dA_dE);
    }
    r.C2_min = F2;
    return r;
}

double barrier_closed_form_width(const BarrierModel& model, double Ebar) {
    model.validate();
    const auto& c = model.consts;
    const double k = c.wavenumber_of(Ebar);
    const double q = model.kprime(k);
    const double shape = q / (k * k + q * q);
    return 8.0 * c.hbar * c.hbar * k * k * k / (c.mass * model.abar) * shape * shape *
           std::exp(-2.0 * q * (model.bbar - model.abar));
}

double barrier_gamma(const BarrierModel& model, const ScaleLaw& law, int n, double t) {
    const auto roots = barrier_roots(model);
    if (n < 1 || static_cast<std::size_t>(n) > roots.size()) {
        throw NoSuchResonance("barrier_gamma: resonance " + std::to_string(n) + " does not exist");
    }
    const double Ebar_n = model.consts.energy_of(roots[static_cast<std::size_t>(n) - 1]);
    return general_gamma([&](double Ebar) { return barrier_closed_form_width(model, Ebar); }, law,
                         model.consts, Ebar_n, t);
}

WidthEstimate barrier_static_rate(const BarrierModel& model, const ScaleLaw& law, int n) {
    const auto roots = barrier_roots(model);
    if (n < 1 || static_cast<std::size_t>(n) > roots.size()) {
        throw NoSuchResonance("barrier_static_rate: resonance " + std::to_string(n) + " does not exist");
    }
    const auto& c = model.consts;
    const double kbar = roots[static_cast<std::size_t>(n) - 1];
    const double qbar = model.kprime(kbar);
    const double L0 = law.L0();
    const double a = model.abar * L0;
    const double b = model.bbar * L0;
    const double k = kbar / L0;
    const double q = qbar / L0;
    WidthEstimate out;
    out.value = 8.0 * c.hbar * c.hbar / (c.mass * a) * k * k * k / (q * q) * std::exp(-2.0 * q * (b - a));
    if (qbar / kbar < kBarrierRegimeRatio) {
        out.warnings.push_back(describe_ratio("kbar'/kbar", qbar / kbar, kBarrierRegimeRatio));
    }
    return out;
}

double general_gamma(const std::function<double(double)>& static_rate_fn, const ScaleLaw& law,
                     const PhysicalConstants& consts, double Ebar_n, double t) {
    const double tau = tau_of_t(law, t);
    if (tau == 0.0) return 0.0;
    return static_rate_fn(Ebar_n) * tau / consts.hbar;
}

} // namespace scaledecay
