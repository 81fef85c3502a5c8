#include "scaledecay/scaling_frame.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace scaledecay {
namespace {

void check_grid(std::span<const double> x, std::size_t n_amp, const char* what) {
    if (x.size() != n_amp) throw GridMismatch(std::string(what) + ": grid and amplitude sizes differ");
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) throw DomainError(std::string(what) + ": grid must be strictly increasing");
    }
}

} // namespace

ScaleLaw::ScaleLaw(double L0, double v) : L0_(L0), v_(v) {
    if (!(L0 > 0.0) || !std::isfinite(L0)) throw DomainError("ScaleLaw: L0 must be positive");
    if (!std::isfinite(v)) throw DomainError("ScaleLaw: v must be finite");
}

double ScaleLaw::window_end() const noexcept {
    return v_ < 0.0 ? L0_ / -v_ : std::numeric_limits<double>::infinity();
}

bool ScaleLaw::in_window(double t) const noexcept { return t >= 0.0 && t < window_end(); }

double ScaleLaw::tau_limit() const noexcept {
    return v_ > 0.0 ? 1.0 / (L0_ * v_) : std::numeric_limits<double>::infinity();
}

double scale_factor(const ScaleLaw& law, double t) {
    if (!law.in_window(t)) {
        throw TimeOutOfWindow("t = " + std::to_string(t) + " outside the validity window [0, " +
                              std::to_string(law.window_end()) + ")");
    }
    return law.L0() + law.v() * t;
}

double tau_of_t(const ScaleLaw& law, double t) {
    if (std::isinf(t) && t > 0.0 && law.v() > 0.0) return law.tau_limit();
    return t / (law.L0() * scale_factor(law, t));
}

double t_of_tau(const ScaleLaw& law, double tau) {
    if (tau < 0.0) throw TimeOutOfWindow("tau must be non-negative");
    // tau L0 (L0 + v t) = t  =>  t = tau L0^2 / (1 - tau L0 v)
    const double denom = 1.0 - tau * law.L0() * law.v();
    if (!(denom > 0.0)) throw TimeOutOfWindow("tau beyond the reachable limit 1/(L0 v)");
    return tau * law.L0() * law.L0() / denom;
}

void LabWaveSample::validate() const { check_grid(x, amplitude.size(), "LabWaveSample"); }

void RescaledWaveSample::validate() const { check_grid(xbar, amplitude.size(), "RescaledWaveSample"); }

LabWaveSample lift_solution(const ScaleLaw& law, const PhysicalConstants& consts, double Ebar,
                            const RescaledWaveSample& phi, double t) {
    consts.validate();
    phi.validate();
    const double L = scale_factor(law, t);
    const double tau = tau_of_t(law, t);
    const double jacobian = 1.0 / std::sqrt(L);
    const double gauge = consts.mass * law.v() / (2.0 * consts.hbar * L);
    const cplx stationary = std::polar(1.0, -Ebar * (tau - phi.tau) / consts.hbar);

    LabWaveSample out;
    out.t = t;
    out.x.resize(phi.xbar.size());
    out.amplitude.resize(phi.xbar.size());
    for (std::size_t i = 0; i < phi.xbar.size(); ++i) {
        const double x = L * phi.xbar[i];
        out.x[i] = x;
        out.amplitude[i] = jacobian * std::polar(1.0, gauge * x * x) * stationary * phi.amplitude[i];
    }
    return out;
}

RescaledWaveSample to_rescaled(const ScaleLaw& law, const PhysicalConstants& consts, double Ebar,
                               const LabWaveSample& psi) {
    consts.validate();
    psi.validate();
    const double L = scale_factor(law, psi.t);
    const double tau = tau_of_t(law, psi.t);
    const double jacobian = std::sqrt(L);
    const double gauge = consts.mass * law.v() / (2.0 * consts.hbar * L);
    const double tau_out = Ebar != 0.0 ? 0.0 : tau;
    const cplx stationary = std::polar(1.0, Ebar * (tau - tau_out) / consts.hbar);

    RescaledWaveSample out;
    out.tau = tau_out;
    out.xbar.resize(psi.x.size());
    out.amplitude.resize(psi.x.size());
    for (std::size_t i = 0; i < psi.x.size(); ++i) {
        const double x = psi.x[i];
        out.xbar[i] = x / L;
        out.amplitude[i] = jacobian * std::polar(1.0, -gauge * x * x) * stationary * psi.amplitude[i];
    }
    return out;
}

LabWaveSample superpose(std::span<const std::pair<cplx, LabWaveSample>> states) {
    if (states.empty()) throw GridMismatch("superpose: no states");
    const LabWaveSample& first = states.front().second;
    first.validate();
    LabWaveSample out;
    out.x = first.x;
    out.t = first.t;
    out.amplitude.assign(first.x.size(), cplx{0.0, 0.0});
    for (const auto& [coefficient, sample] : states) {
        if (sample.t != first.t) throw GridMismatch("superpose: samples at different times");
        if (sample.x != first.x) throw GridMismatch("superpose: samples on different grids");
        if (sample.amplitude.size() != out.amplitude.size()) throw GridMismatch("superpose: amplitude size");
        for (std::size_t i = 0; i < out.amplitude.size(); ++i) out.amplitude[i] += coefficient * sample.amplitude[i];
    }
    return out;
}

double norm_squared(std::span<const double> x, std::span<const cplx> amplitude) {
    if (x.size() != amplitude.size()) throw GridMismatch("norm_squared: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        sum += 0.5 * (x[i] - x[i - 1]) * (std::norm(amplitude[i]) + std::norm(amplitude[i - 1]));
    }
    return sum;
}

cplx inner_product(const LabWaveSample& a, const LabWaveSample& b) {
    if (a.x != b.x) throw GridMismatch("inner_product: different grids");
    cplx sum{0.0, 0.0};
    for (std::size_t i = 1; i < a.x.size(); ++i) {
        sum += 0.5 * (a.x[i] - a.x[i - 1]) *
               (std::conj(a.amplitude[i]) * b.amplitude[i] + std::conj(a.amplitude[i - 1]) * b.amplitude[i - 1]);
    }
    return sum;
}

} // namespace scaledecay
