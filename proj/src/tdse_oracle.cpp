#include "scaledecay/tdse_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "scaledecay/numerics.hpp"

#if defined(__SSE2__) || defined(_M_X64)
#include <xmmintrin.h>
#define SCALEDECAY_HAVE_MXCSR 1
#endif

namespace scaledecay {
namespace {

constexpr int kPointsPerWavelength = 10;
constexpr double kDomainSafety = 3.0;

// Far tails of the evolved state underflow into subnormals, which are very slow on
// x86. Flush them to zero for the duration of a run and restore the caller's mode.
class DenormalGuard {
public:
#ifdef SCALEDECAY_HAVE_MXCSR
    DenormalGuard() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
    ~DenormalGuard() { _mm_setcsr(saved_); }

private:
    unsigned saved_;
#endif
};

std::vector<double> output_schedule(const EvolutionConfig& cfg) {
    if (!cfg.output_times.empty()) return cfg.output_times;
    std::vector<double> out;
    for (int i = 1; i <= cfg.output_samples; ++i) out.push_back(cfg.total_time * i / cfg.output_samples);
    return out;
}

double probability_below(const std::vector<cplx>& psi, double h, double edge) {
    const auto M = psi.size() - 1;
    const double pos = std::clamp(edge / h, 0.0, static_cast<double>(M));
    const auto i = std::min(static_cast<std::size_t>(pos), M);
    double sum = 0.0;
    for (std::size_t j = 0; j < i; ++j) sum += 0.5 * h * (std::norm(psi[j]) + std::norm(psi[j + 1]));
    if (i < M) {
        const double d = (pos - static_cast<double>(i)) * h;
        const double r0 = std::norm(psi[i]);
        const double r1 = std::norm(psi[i + 1]);
        sum += d * (r0 + 0.5 * (r1 - r0) * d / h);
    }
    return sum;
}

double probability_total(const std::vector<cplx>& psi, double h) {
    return probability_below(psi, h, h * static_cast<double>(psi.size() - 1));
}

// Tridiagonal lab Hamiltonian on the interior nodes 1..M-1 at time t.
class LabHamiltonian {
public:
    LabHamiltonian(const RescaledPotential& pot, const ScaleLaw& law, const PhysicalConstants& consts,
                   const EvolutionConfig& cfg)
        : pot_(pot), law_(law), consts_(consts), h_(cfg.grid_step()), M_(static_cast<std::size_t>(cfg.grid_points - 1)) {
        absorb_.assign(M_ + 1, 0.0);
        if (cfg.boundary == Boundary::absorbing) {
            const double D = cfg.domain_end;
            const double start = D * (1.0 - cfg.absorbing_fraction);
            for (std::size_t j = 0; j <= M_; ++j) {
                const double x = static_cast<double>(j) * h_;
                if (x > start) {
                    const double s = (x - start) / (D - start);
                    absorb_[j] = cfg.absorbing_strength * s * s;
                }
            }
        }
        edges_.assign(pot.breakpoints().begin(), pot.breakpoints().end());
        edges_.push_back(pot.support_end());
        diag.resize(M_ + 1);
        off.resize(M_ + 1);
    }

    // diag[j] for nodes 1..M-1; off[j] couples j and j+1.
    void assemble(double t) {
        const double L = scale_factor(law_, t);
        const double kin = consts_.hbar * consts_.hbar / (consts_.mass * h_ * h_);
        for (std::size_t j = 0; j <= M_; ++j) {
            diag[j] = cplx(kin, -absorb_[j]);
            off[j] = -0.5 * kin;
        }
        if (pot_.max_abs_value() > 0.0) {
            const double xend = pot_.support_end() * L;
            const auto jmax = std::min(M_, static_cast<std::size_t>(xend / h_) + 1);
            const double inv_L2 = 1.0 / (L * L);
            for (std::size_t j = 1; j <= jmax; ++j) diag[j] += cell_value(static_cast<double>(j) * h_, L) * inv_L2;
        }
        for (const auto& d : pot_.deltas()) {
            const double X = d.position * L;
            const double s = d.strength / L;
            const auto i = static_cast<std::size_t>(X / h_);
            if (i >= M_) continue;
            const double dl = X - static_cast<double>(i) * h_;
            const double dr = h_ - dl;
            const double beta = consts_.two_m_over_hbar2() * s;
            const double s_eff = s / (1.0 + beta * dl * dr / h_);
            const double wl = dr / h_;
            const double wr = dl / h_;
            const double c = s_eff / h_;
            diag[i] += c * wl * wl;
            diag[i + 1] += c * wr * wr;
            off[i] += c * wl * wr;
        }
    }

private:
    // Node value of Vbar(x/L). Next to a discontinuity it is the hat-weighted mean over
    // (x - h, x + h), integrated piecewise between the edges.
    double cell_value(double x, double L) const {
        const double lo = x - h_;
        const double hi = x + h_;
        std::vector<double> cuts{lo, x, hi};
        for (double e : edges_) {
            const double xe = e * L;
            if (xe > lo && xe < hi) cuts.push_back(xe);
        }
        if (cuts.size() == 3) return pot_.value(x / L);
        std::sort(cuts.begin(), cuts.end());
        constexpr double g = 0.7745966692414834;
        constexpr std::array<double, 3> nodes{-g, 0.0, g};
        constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        double sum = 0.0;
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
            const double half = 0.5 * (cuts[p + 1] - cuts[p]);
            if (half <= 0.0) continue;
            for (std::size_t q = 0; q < 3; ++q) {
                const double xq = mid + half * nodes[q];
                sum += weights[q] * half * (1.0 - std::abs(xq - x) / h_) * pot_.value(xq / L);
            }
        }
        return sum / h_;
    }

    const RescaledPotential& pot_;
    const ScaleLaw& law_;
    const PhysicalConstants& consts_;
    double h_;
    std::size_t M_;
    std::vector<double> absorb_;
    std::vector<double> edges_;

public:
    std::vector<cplx> diag;
    std::vector<cplx> off;
};

} // namespace

void EvolutionConfig::validate() const {
    if (!(domain_end > 0.0)) throw DomainError("oracle: domain_end must be positive");
    if (grid_points < 8) throw DomainError("oracle: need at least 8 grid points");
    if (!(time_step > 0.0)) throw DomainError("oracle: time_step must be positive");
    if (!(total_time > 0.0)) throw DomainError("oracle: total_time must be positive");
    if (output_times.empty() && output_samples < 1) throw DomainError("oracle: need at least one output");
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        const double prev = i == 0 ? 0.0 : output_times[i - 1];
        if (!(output_times[i] > prev) || output_times[i] > total_time * (1.0 + 1e-12)) {
            throw DomainError("oracle: output_times must increase within (0, total_time]");
        }
    }
    if (boundary == Boundary::absorbing && !(absorbing_fraction > 0.0 && absorbing_fraction < 1.0)) {
        throw DomainError("oracle: absorbing_fraction must lie in (0, 1)");
    }
    if (!(boundary_band > 0.0 && boundary_band < 1.0)) throw DomainError("oracle: boundary_band must lie in (0, 1)");
}

std::vector<double> oracle_grid(const EvolutionConfig& cfg) {
    cfg.validate();
    return numerics::linspace(0.0, cfg.domain_end, cfg.grid_points);
}

LabWaveSample lifted_initial_state(const std::function<double(double)>& profile, const ScaleLaw& law,
                                   const PhysicalConstants& consts, const std::vector<double>& grid, bool gauge_phase) {
    consts.validate();
    const double L = law.L0();
    LabWaveSample out;
    out.x = grid;
    out.t = 0.0;
    out.amplitude.resize(grid.size());
    const double jac = 1.0 / std::sqrt(L);
    const double chirp = gauge_phase ? consts.mass * law.v() / (2.0 * consts.hbar * L) : 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        out.amplitude[i] = jac * std::polar(1.0, chirp * x * x) * profile(x / L);
    }
    return out;
}

OracleResult evolve(const RescaledPotential& pot, const ScaleLaw& law, const PhysicalConstants& consts,
                    const LabWaveSample& psi0, const EvolutionConfig& cfg) {
    consts.validate();
    cfg.validate();
    psi0.validate();
    if (psi0.t != 0.0) throw DomainError("oracle: initial state must be given at t = 0");
    if (!law.in_window(cfg.total_time)) throw TimeOutOfWindow("oracle: total_time beyond the scale-law window");

    const auto grid = oracle_grid(cfg);
    const double h = cfg.grid_step();
    const auto M = grid.size() - 1;
    const double D = cfg.domain_end;

    const double reach = pot.support_end() * scale_factor(law, cfg.total_time);
    if (D < kDomainSafety * reach) {
        throw DomainTooSmall("oracle: domain_end " + std::to_string(D) + " is below " +
                             std::to_string(kDomainSafety) + " x the potential extent " + std::to_string(reach));
    }
    if (cfg.boundary == Boundary::absorbing && D * (1.0 - cfg.absorbing_fraction) < kDomainSafety * reach) {
        throw DomainTooSmall("oracle: absorbing layer reaches into the potential region");
    }

    std::vector<cplx> psi(M + 1);
    bool same_grid = psi0.x.size() == grid.size();
    for (std::size_t j = 0; same_grid && j <= M; ++j) same_grid = std::abs(psi0.x[j] - grid[j]) <= 1e-9 * h;
    for (std::size_t j = 0; j <= M; ++j) psi[j] = same_grid ? psi0.amplitude[j] : numerics::interpolate(psi0.x, psi0.amplitude, grid[j]);
    psi[0] = 0.0;
    psi[M] = 0.0;

    const double norm0 = probability_total(psi, h);
    if (!(norm0 > 0.0)) throw DomainError("oracle: initial state vanishes on the grid");
    double grad = 0.0;
    for (std::size_t j = 0; j < M; ++j) grad += std::norm(psi[j + 1] - psi[j]) / h;
    const double k_rms = std::sqrt(grad / norm0);
    if (h * k_rms * kPointsPerWavelength > 2.0 * pi) {
        throw ResolutionError("oracle: grid step " + std::to_string(h) + " gives fewer than " +
                              std::to_string(kPointsPerWavelength) + " points per wavelength of the initial state");
    }

    auto well_edge = [&](double t) { return pot.well_end() * scale_factor(law, t); };
    const double P0 = probability_below(psi, h, well_edge(0.0));
    if (!(P0 > 0.0)) throw DomainError("oracle: initial state has no weight inside the well");

    OracleResult res;
    res.curve.provenance = Provenance::oracle;
    auto record = [&](double t) {
        const double P = probability_below(psi, h, well_edge(t)) / P0;
        res.curve.times.push_back(t);
        res.curve.tau.push_back(tau_of_t(law, t));
        res.curve.P.push_back(P);
        res.curve.gamma.push_back(P > 0.0 ? -std::log(P) : INFINITY);
    };
    auto snapshot = [&](double t) {
        LabWaveSample s;
        s.x = grid;
        s.t = t;
        s.amplitude = psi;
        return s;
    };
    record(0.0);

    const double band_start = D * (1.0 - cfg.boundary_band);
    auto band_probability = [&] { return (probability_total(psi, h) - probability_below(psi, h, band_start)) / norm0; };

    LabHamiltonian H(pot, law, consts, cfg);
    const std::size_t n = M - 1;
    std::vector<cplx> cp(n), dp(n);
    const auto outputs = output_schedule(cfg);
    const DenormalGuard guard;
    double t = 0.0;
    double peak_band = 0.0;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        const double target = outputs[k];
        const int substeps = std::max(1, static_cast<int>(std::ceil((target - t) / cfg.time_step - 1e-9)));
        const double dt = (target - t) / substeps;
        const cplx ia(0.0, 0.5 * dt / consts.hbar);
        for (int s = 0; s < substeps; ++s) {
            H.assemble(t + 0.5 * dt);
            // (1 + ia H) psi' = (1 - ia H) psi, forward sweep fused with the right-hand side.
            cplx c_prev = 0.0;
            cplx d_prev = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const std::size_t j = r + 1;
                const cplx a = ia * H.off[j - 1];
                const cplx c = ia * H.off[j];
                const cplx b = 1.0 + ia * H.diag[j];
                const cplx d = psi[j] - ia * (H.diag[j] * psi[j] + H.off[j - 1] * psi[j - 1] + H.off[j] * psi[j + 1]);
                const cplx pivot = b - a * c_prev;
                const double nrm = std::norm(pivot);
                const cplx inv(pivot.real() / nrm, -pivot.imag() / nrm);
                c_prev = c * inv;
                d_prev = (d - a * d_prev) * inv;
                cp[r] = c_prev;
                dp[r] = d_prev;
            }
            psi[n] = dp[n - 1];
            for (std::size_t r = n - 1; r-- > 0;) psi[r + 1] = dp[r] - cp[r] * psi[r + 2];
            t = (s + 1 == substeps) ? target : t + dt;
        }
        record(t);
        if (cfg.boundary == Boundary::reflecting) peak_band = std::max(peak_band, band_probability());
        if (cfg.snapshot_every > 0 && (k + 1) % static_cast<std::size_t>(cfg.snapshot_every) == 0) {
            res.snapshots.push_back(snapshot(t));
        }
    }

    const double normT = probability_total(psi, h);
    if (cfg.boundary == Boundary::reflecting) {
        res.norm_drift = std::abs(normT - norm0) / norm0;
        res.leak_at_boundary = peak_band;
        if (cfg.strict && res.norm_drift > cfg.norm_drift_bound) {
            throw UnstableStep("oracle: norm drift " + std::to_string(res.norm_drift) + " exceeds bound");
        }
        if (cfg.strict && peak_band > cfg.boundary_leak_threshold) {
            throw DomainTooSmall("oracle: probability " + std::to_string(peak_band) +
                                 " reached the outer boundary band before total_time");
        }
    } else {
        res.norm_drift = 0.0;
        res.leak_at_boundary = 1.0 - normT / norm0;
    }
    res.final_state = snapshot(t);
    return res;
}

FrameConsistency frame_consistency_check(const RescaledPotential& pot, const ScaleLaw& law,
                                         const PhysicalConstants& consts,
                                         const std::function<double(double)>& profile, EvolutionConfig cfg) {
    cfg.validate();
    if (cfg.output_times.empty()) cfg.output_times = output_schedule(cfg);
    const double L0 = law.L0();

    FrameConsistency out;
    const auto lab_grid = oracle_grid(cfg);
    out.lab = evolve(pot, law, consts, lifted_initial_state(profile, law, consts, lab_grid), cfg);

    EvolutionConfig rc = cfg;
    rc.domain_end = cfg.domain_end / L0;
    rc.time_step = cfg.time_step / (L0 * L0);
    rc.total_time = tau_of_t(law, cfg.total_time);
    rc.absorbing_strength = cfg.absorbing_strength * L0 * L0;
    rc.output_times.clear();
    for (double t : cfg.output_times) rc.output_times.push_back(tau_of_t(law, t));
    rc.total_time = rc.output_times.back();
    const ScaleLaw frozen(1.0, 0.0);
    const auto bar_grid = oracle_grid(rc);
    out.rescaled = evolve(pot, frozen, consts, lifted_initial_state(profile, frozen, consts, bar_grid), rc);

    for (std::size_t k = 0; k < out.lab.curve.P.size(); ++k) {
        out.max_P_discrepancy = std::max(out.max_P_discrepancy, std::abs(out.lab.curve.P[k] - out.rescaled.curve.P[k]));
    }

    auto compare = [&](const LabWaveSample& lab, const LabWaveSample& bar) {
        const double L = scale_factor(law, lab.t);
        const double chirp = consts.mass * law.v() / (2.0 * consts.hbar * L);
        const double keep = cfg.boundary == Boundary::absorbing ? 1.0 - cfg.absorbing_fraction : 1.0;
        const double xmax = std::min(cfg.domain_end, L * rc.domain_end) * keep;
        double peak = 0.0;
        double diff = 0.0;
        for (std::size_t j = 0; j < lab.x.size() && lab.x[j] <= xmax; ++j) {
            const double x = lab.x[j];
            const cplx lifted = std::polar(1.0 / std::sqrt(L), chirp * x * x) * numerics::interpolate(bar.x, bar.amplitude, x / L);
            peak = std::max(peak, std::abs(lab.amplitude[j]));
            diff = std::max(diff, std::abs(lifted - lab.amplitude[j]));
        }
        return peak > 0.0 ? diff / peak : diff;
    };
    for (std::size_t k = 0; k < out.lab.snapshots.size(); ++k) {
        out.max_amplitude_discrepancy = std::max(out.max_amplitude_discrepancy, compare(out.lab.snapshots[k], out.rescaled.snapshots[k]));
    }
    out.max_amplitude_discrepancy = std::max(out.max_amplitude_discrepancy, compare(out.lab.final_state, out.rescaled.final_state));
    return out;
}

} // namespace scaledecay
