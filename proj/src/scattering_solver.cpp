#include "scaledecay/scattering_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "scaledecay/numerics.hpp"

namespace scaledecay {
namespace {

constexpr int kPointsPerScale = 20;
constexpr int kStartSubsteps = 16;

struct Segment {
    double lo;
    double hi;
    int steps;
};

// Segment boundaries: wall, breakpoints, well edge and support end. Every member
// of a box superposition must share this grid, so it only depends on the potential.
std::vector<Segment> make_segments(const RescaledPotential& pot, double grid_step) {
    std::vector<double> edges{0.0};
    for (double b : pot.breakpoints()) edges.push_back(b);
    if (pot.well_end() < pot.support_end()) edges.push_back(pot.well_end());
    edges.push_back(pot.support_end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double len = edges[i + 1] - edges[i];
        const int steps = std::max(4, static_cast<int>(std::ceil(len / grid_step - 1e-9)));
        segs.push_back({edges[i], edges[i + 1], steps});
    }
    return segs;
}

void check_resolution(const RescaledPotential& pot, const PhysicalConstants& consts, double kbar,
                      double grid_step, const std::vector<Segment>& segs) {
    double scale = 1.0 / kbar;
    const double qmax = std::sqrt(consts.two_m_over_hbar2() * pot.max_abs_value());
    if (qmax > 0.0) scale = std::min(scale, 1.0 / qmax);
    for (const auto& s : segs) scale = std::min(scale, s.hi - s.lo);
    if (grid_step * kPointsPerScale > scale * (1.0 + 1e-12)) {
        throw ResolutionError("grid_step " + std::to_string(grid_step) + " is coarser than 1/" +
                              std::to_string(kPointsPerScale) + " of the shortest scale " + std::to_string(scale));
    }
}

struct Endpoint {
    double value;
    double slope;
    int nodes;
};

// Integrates Phi'' = -q(x) Phi from Phi(0) = 0, Phi'(0) = kbar across every segment.
// When `xs`/`ys` are given the samples are appended (shared boundary points once).
Endpoint integrate_core(const RescaledPotential& pot, const PhysicalConstants& consts, double kbar,
                        const std::vector<Segment>& segs, std::vector<double>* xs, std::vector<double>* ys) {
    const double k2 = kbar * kbar;
    const double c = consts.two_m_over_hbar2();
    double y = 0.0;
    double dy = kbar;
    int nodes = 0;
    int last_sign = 1;

    auto track = [&](double value) {
        if (value == 0.0) return;
        const int s = value > 0.0 ? 1 : -1;
        if (s != last_sign) ++nodes;
        last_sign = s;
    };

    if (xs) {
        xs->push_back(0.0);
        ys->push_back(0.0);
    }

    std::vector<double> qv;
    std::vector<double> yv;
    for (const auto& seg : segs) {
        const int n = seg.steps;
        const double h = (seg.hi - seg.lo) / n;
        // One-sided evaluation keeps step discontinuities at the segment edges out of the stencil.
        const double eps = 1e-12 * (seg.hi - seg.lo);
        qv.resize(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            const double x = std::clamp(seg.lo + i * h, seg.lo + eps, seg.hi - eps);
            qv[static_cast<std::size_t>(i)] = k2 - c * pot.value(x);
        }
        auto q_at = [&](double x) { return k2 - c * pot.value(std::clamp(x, seg.lo + eps, seg.hi - eps)); };

        // First step by RK4 substeps to seed the two-step recurrence.
        double y1 = y;
        double d1 = dy;
        const double hs = h / kStartSubsteps;
        for (int s = 0; s < kStartSubsteps; ++s) {
            const double x = seg.lo + s * hs;
            const double qa = q_at(x);
            const double qm = q_at(x + 0.5 * hs);
            const double qb = q_at(x + hs);
            const double k1y = d1, k1d = -qa * y1;
            const double k2y = d1 + 0.5 * hs * k1d, k2d = -qm * (y1 + 0.5 * hs * k1y);
            const double k3y = d1 + 0.5 * hs * k2d, k3d = -qm * (y1 + 0.5 * hs * k2y);
            const double k4y = d1 + hs * k3d, k4d = -qb * (y1 + hs * k3y);
            y1 += hs / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            d1 += hs / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        }

        yv.resize(static_cast<std::size_t>(n) + 1);
        yv[0] = y;
        yv[1] = y1;
        const double h2 = h * h / 12.0;
        for (int i = 1; i < n; ++i) {
            const auto u = static_cast<std::size_t>(i);
            yv[u + 1] = (2.0 * (1.0 - 5.0 * h2 * qv[u]) * yv[u] - (1.0 + h2 * qv[u - 1]) * yv[u - 1]) /
                        (1.0 + h2 * qv[u + 1]);
        }
        for (int i = 1; i <= n; ++i) {
            track(yv[static_cast<std::size_t>(i)]);
            if (xs) {
                xs->push_back(seg.lo + i * h);
                ys->push_back(yv[static_cast<std::size_t>(i)]);
            }
        }
        if (xs) xs->back() = seg.hi;

        const auto N = static_cast<std::size_t>(n);
        const double fN = -qv[N] * yv[N];
        const double fN1 = -qv[N - 1] * yv[N - 1];
        const double fN2 = -qv[N - 2] * yv[N - 2];
        y = yv[N];
        dy = (yv[N] - yv[N - 1]) / h + h * (7.0 * fN + 6.0 * fN1 - fN2) / 24.0;

        for (const auto& d : pot.deltas()) {
            if (d.position == seg.hi) dy += c * d.strength * y;
        }
    }
    return {y, dy, nodes};
}

void require_k(double kbar) {
    if (!(kbar > 0.0) || !std::isfinite(kbar)) throw DomainError("kbar must be positive");
}

} // namespace

double ScatteringState::evaluate(double x) const {
    if (x < 0.0) return 0.0;
    if (!xbar.empty() && x <= xbar.back()) {
        const auto it = std::upper_bound(xbar.begin(), xbar.end(), x);
        if (it == xbar.end()) return interior_samples.back();
        const auto i = static_cast<std::size_t>(it - xbar.begin());
        const double t = (x - xbar[i - 1]) / (xbar[i] - xbar[i - 1]);
        return (1.0 - t) * interior_samples[i - 1] + t * interior_samples[i];
    }
    return C * std::cos(kbar * x + theta);
}

ScatteringState integrate_state(const RescaledPotential& pot, const PhysicalConstants& consts, double kbar,
                                double grid_step) {
    require_k(kbar);
    consts.validate();
    if (!(grid_step > 0.0)) throw DomainError("grid_step must be positive");
    const auto segs = make_segments(pot, grid_step);
    check_resolution(pot, consts, kbar, grid_step, segs);

    ScatteringState s;
    s.kbar = kbar;
    s.Ebar = consts.energy_of(kbar);
    const auto end = integrate_core(pot, consts, kbar, segs, &s.xbar, &s.interior_samples);
    const double X = pot.support_end();
    s.value_end = end.value;
    s.slope_end = end.slope;
    s.node_count = end.nodes;
    const double u = end.slope / kbar;
    s.C = std::hypot(end.value, u);
    double th = std::atan2(-u, end.value) - kbar * X;
    th = std::remainder(th, 2.0 * pi);
    if (th <= -pi) th += 2.0 * pi;
    s.theta = th;
    const double sign = (end.nodes % 2 == 0) ? 1.0 : -1.0;
    s.phase_end = end.nodes * pi + std::atan2(sign * end.value, sign * u);
    return s;
}

std::vector<C2Sample> scan_C2(const RescaledPotential& pot, const PhysicalConstants& consts, double kmin,
                              double kmax, int n_samples, double grid_step, int threads) {
    if (!(kmin > 0.0) || !(kmax > kmin)) throw DomainError("scan needs 0 < kmin < kmax");
    if (n_samples < 2) throw DomainError("scan needs at least two samples");
    consts.validate();
    const auto segs = make_segments(pot, grid_step);
    check_resolution(pot, consts, kmax, grid_step, segs);

    const auto ks = numerics::linspace(kmin, kmax, n_samples);
    std::vector<C2Sample> out(ks.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto e = integrate_core(pot, consts, ks[i], segs, nullptr, nullptr);
            const double u = e.slope / ks[i];
            out[i] = {ks[i], e.value * e.value + u * u};
        }
    };

    const auto n = ks.size();
    const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, static_cast<int>(n)));
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
        }
    }
    return out;
}

std::vector<MinimumBracket> locate_minima(std::span<const C2Sample> scan, const std::function<double(double)>& refine,
                                          double rel_tol, double min_depth) {
    std::vector<MinimumBracket> out;
    for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
        const double f = scan[i].C2;
        const double fl = scan[i - 1].C2;
        const double fr = scan[i + 1].C2;
        if (!(f < fl && f < fr)) continue;
        if (std::max(fl, fr) - f <= min_depth * std::abs(f)) continue;
        MinimumBracket b{scan[i - 1].kbar, scan[i + 1].kbar, 0.0, 0.0};
        if (refine) {
            const auto m = numerics::minimize_bracketed(refine, b.lo, b.hi, rel_tol);
            b.kbar = m.x;
            b.C2 = m.f;
        } else {
            b.kbar = numerics::parabola_vertex(b.lo, fl, scan[i].kbar, f, b.hi, fr);
            b.C2 = f;
        }
        out.push_back(b);
    }
    return out;
}

QuadraticFit fit_quadratic_model(std::span<const double> E, std::span<const double> y, double E_anchor) {
    const auto n = E.size();
    if (n != y.size()) throw DomainError("fit: energy and C2 samples differ in length");
    if (n < 7) throw DomainError("fit needs at least 7 samples");
    const auto [emin, emax] = std::minmax_element(E.begin(), E.end());
    const double scale = 0.5 * (*emax - *emin);
    if (!(scale > 0.0)) throw DomainError("fit: degenerate energy window");

    // Linear start: y = c0 + c1 u + c2 u^2 with u = (E - anchor)/scale.
    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (E[i] - E_anchor) / scale;
        const auto r = static_cast<Eigen::Index>(i);
        A(r, 0) = 1.0;
        A(r, 1) = u;
        A(r, 2) = u * u;
        b(r) = y[i];
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    const double ymin = *std::min_element(y.begin(), y.end());
    double c2 = c(2) > 0.0 ? c(2) : std::max(std::abs(c(2)), 1e-3 * std::abs(ymin));
    double shift = c(1) / (2.0 * c2); // in units of scale
    double F2 = c(0) - c2 * shift * shift;
    if (!(F2 > 0.0)) F2 = std::max(ymin, 1e-300);

    // Levenberg-Marquardt in p = (log F^2, log G^2 scale^2, delta/scale).
    Eigen::Vector3d p(std::log(F2), std::log(c2), shift);
    auto residuals = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        const double f2 = std::exp(q(0));
        const double g2 = std::exp(q(1));
        r.resize(static_cast<Eigen::Index>(n));
        if (J) J->resize(static_cast<Eigen::Index>(n), 3);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const double w = (E[i] - E_anchor) / scale + q(2);
            r(row) = g2 * w * w + f2 - y[i];
            if (J) {
                (*J)(row, 0) = f2;
                (*J)(row, 1) = g2 * w * w;
                (*J)(row, 2) = 2.0 * g2 * w;
            }
        }
        return r.squaredNorm();
    };

    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    double cost = residuals(p, r, &J);
    double lambda = 1e-3;
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::Matrix3d JtJ = J.transpose() * J;
        const Eigen::Vector3d g = J.transpose() * r;
        Eigen::Matrix3d M = JtJ;
        for (int d = 0; d < 3; ++d) M(d, d) += lambda * std::max(JtJ(d, d), 1e-300);
        const Eigen::Vector3d step = M.ldlt().solve(-g);
        const Eigen::Vector3d trial = p + step;
        Eigen::VectorXd rt;
        const double ct = residuals(trial, rt, nullptr);
        if (std::isfinite(ct) && ct < cost) {
            const bool done = cost - ct <= 1e-15 * cost || step.norm() <= 1e-13 * (1.0 + p.norm());
            p = trial;
            cost = residuals(p, r, &J);
            lambda = std::max(lambda * 0.3, 1e-12);
            if (done) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    QuadraticFit fit;
    const double f2 = std::exp(p(0));
    fit.F = std::sqrt(f2);
    fit.G = std::sqrt(std::exp(p(1))) / scale;
    fit.delta_shift = p(2) * scale;
    fit.residual = std::sqrt(cost / static_cast<double>(n)) / f2;
    return fit;
}

double estimate_halfwidth(const RescaledPotential& pot, const PhysicalConstants& consts, double kbar_min,
                          double grid_step) {
    require_k(kbar_min);
    auto c2 = [&](double E) {
        const auto s = integrate_state(pot, consts, consts.wavenumber_of(E), grid_step);
        return s.C * s.C;
    };
    const double E0 = consts.energy_of(kbar_min);
    const double f2 = c2(E0);
    double d = 1e-4 * E0;
    double w = d;
    for (int it = 0; it < 3; ++it) {
        d = std::min(d, 0.5 * E0);
        const double curv = (c2(E0 + d) + c2(E0 - d) - 2.0 * f2) / (2.0 * d * d);
        if (!(curv > 0.0)) throw FitDiverged("C2 is not convex around the minimum");
        w = std::sqrt(f2 / curv);
        d = w;
    }
    return w;
}

ResonanceFit fit_resonance(const RescaledPotential& pot, const PhysicalConstants& consts,
                           const MinimumBracket& bracket, double window_halfwidth, const FitOptions& options) {
    consts.validate();
    if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo)) throw DomainError("fit_resonance: invalid bracket");
    if (options.samples < 7) throw DomainError("fit_resonance needs at least 7 samples");
    const double h = options.grid_step;
    auto c2k = [&](double k) {
        const auto s = integrate_state(pot, consts, k, h);
        return s.C * s.C;
    };

    const auto m = numerics::minimize_bracketed(c2k, bracket.lo, bracket.hi, 1e-12);
    const double Emin = consts.energy_of(m.x);
    const double w = window_halfwidth > 0.0 ? window_halfwidth : estimate_halfwidth(pot, consts, m.x, h);
    if (!(Emin - w > 0.0)) throw WindowTooWide("fit window reaches Ebar <= 0");

    const auto Es = numerics::linspace(Emin - w, Emin + w, options.samples);
    std::vector<double> ys(Es.size());
    for (std::size_t i = 0; i < Es.size(); ++i) ys[i] = c2k(consts.wavenumber_of(Es[i]));

    const auto imin = static_cast<std::size_t>(std::min_element(ys.begin(), ys.end()) - ys.begin());
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
        const bool ok = i < imin ? ys[i + 1] < ys[i] : ys[i + 1] > ys[i];
        if (!ok) throw WindowTooWide("C2 is not unimodal over the fit window");
    }

    const double anchor = options.anchor_kbar ? consts.energy_of(*options.anchor_kbar) : Emin;
    const auto q = fit_quadratic_model(Es, ys, anchor);
    if (!(q.residual <= options.residual_threshold)) {
        throw FitDiverged("fit residual " + std::to_string(q.residual) + " exceeds threshold " +
                          std::to_string(options.residual_threshold));
    }

    ResonanceFit out;
    auto& r = out.resonance;
    r.index_n = options.index_n;
    r.kbar_n = options.anchor_kbar ? *options.anchor_kbar : m.x;
    r.Ebar_n = anchor;
    r.F = q.F;
    r.G = q.G;
    r.delta_shift = options.anchor_kbar ? q.delta_shift : 0.0;
    r.C2_min = m.f;
    r.origin = Provenance::fitted;
    if (pot.kind() == PotentialKind::square_barrier) {
        const double q2 = consts.two_m_over_hbar2() * pot.max_abs_value() - r.kbar_n * r.kbar_n;
        if (q2 > 0.0) r.kprime_n = std::sqrt(q2);
    }
    out.window_lo = Es.front();
    out.window_hi = Es.back();
    out.residual = q.residual;
    out.samples_used = options.samples;
    out.kbar_min = m.x;
    return out;
}

double AssembledState::evaluate(double x) const {
    if (x < 0.0 || x > box_length_R) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < member_states.size(); ++j) sum += amplitudes[j] * member_states[j].evaluate(x);
    return sum;
}

double AssembledState::target(double x) const {
    if (x < 0.0 || x > target_end) return 0.0;
    if (x <= well_end) return target_norm * std::sin(target_wavenumber * x);
    return target_norm * std::sin(target_wavenumber * well_end) * std::exp(-target_decay * (x - well_end));
}

AssembledState assemble_confined_state(const RescaledPotential& pot, const PhysicalConstants& consts,
                                       const Resonance& resonance, double R, int n_members, double grid_step) {
    consts.validate();
    const double a = pot.well_end();
    const double X = pot.support_end();
    if (!(R >= 50.0 * a) || !(R > X)) throw BoxTooSmall("box length must be at least 50 well lengths");
    if (n_members < 1 || n_members % 2 == 0) throw DomainError("member count must be odd and positive");

    AssembledState st;
    st.box_length_R = R;
    st.well_end = a;
    st.target_wavenumber = pot.kind() == PotentialKind::delta ? resonance.index_n * pi / a : resonance.kbar_n;
    const double kt = st.target_wavenumber;
    st.target_end = a;
    double tail = 0.0;
    if (pot.kind() == PotentialKind::square_barrier) {
        // Evanescent continuation through the barrier keeps the profile smooth at abar.
        const double q2 = consts.two_m_over_hbar2() * pot.max_abs_value() - kt * kt;
        if (q2 > 0.0) {
            const double q = std::sqrt(q2);
            const double b = X;
            const double s0 = std::sin(kt * a);
            st.target_decay = q;
            st.target_end = b;
            tail = s0 * s0 * (1.0 - std::exp(-2.0 * q * (b - a))) / (2.0 * q);
        }
    }
    st.target_norm = 1.0 / std::sqrt(0.5 * a - std::sin(2.0 * kt * a) / (4.0 * kt) + tail);
    const double te = st.target_end;

    const double Ec = resonance.Ebar_n - resonance.delta_shift;
    if (!(Ec > 0.0)) throw DomainError("resonance centre must have positive energy");
    const double kc = consts.wavenumber_of(Ec);
    const auto segs = make_segments(pot, grid_step);
    check_resolution(pot, consts, kc + n_members * pi / R, grid_step, segs);

    auto theta_box = [&](double k) {
        const auto e = integrate_core(pot, consts, k, segs, nullptr, nullptr);
        const double u = e.slope / k;
        const double sign = (e.nodes % 2 == 0) ? 1.0 : -1.0;
        return e.nodes * pi + std::atan2(sign * e.value, sign * u) + k * (R - X);
    };

    const long jc = std::lround(theta_box(kc) / pi);
    const long half = (n_members - 1) / 2;
    const long j0 = std::max(1L, jc - half);
    const double dk = pi / R;

    auto solve_level = [&](long j, double guess) {
        const double target = j * pi;
        double lo = guess;
        double hi = guess;
        if (theta_box(guess) < target) {
            do {
                lo = hi;
                hi += dk;
            } while (theta_box(hi) < target);
        } else {
            do {
                hi = lo;
                lo = std::max(0.5 * lo, lo - dk);
            } while (theta_box(lo) > target);
        }
        return numerics::bisect([&](double k) { return theta_box(k) - target; }, lo, hi, 1e-14 * hi, 200);
    };

    std::vector<double> ks;
    double guess = std::max(kc + (j0 - jc) * dk, 0.5 * dk);
    for (long j = j0; j < j0 + n_members; ++j) {
        const double k = solve_level(j, guess);
        ks.push_back(k);
        guess = k + 0.5 * dk;
    }

    // Members, their box norms and projections onto the target.
    std::vector<double> proj;
    for (double k : ks) {
        auto s = integrate_state(pot, consts, k, grid_step);
        std::vector<double> sq(s.xbar.size());
        std::vector<double> tp(s.xbar.size());
        std::size_t iw = 0;
        for (std::size_t i = 0; i < s.xbar.size(); ++i) {
            sq[i] = s.interior_samples[i] * s.interior_samples[i];
            tp[i] = s.interior_samples[i] * st.target(s.xbar[i]);
            if (s.xbar[i] <= te) iw = i;
        }
        const double inner = numerics::trapezoid(s.xbar, sq);
        const double ph1 = 2.0 * (k * R + s.theta);
        const double ph0 = 2.0 * (k * X + s.theta);
        const double outer = s.C * s.C * (0.5 * (R - X) + (std::sin(ph1) - std::sin(ph0)) / (4.0 * k));
        const double norm = std::sqrt(inner + outer);
        const std::span<const double> xw(s.xbar.data(), iw + 1);
        const std::span<const double> tw(tp.data(), iw + 1);
        proj.push_back(numerics::trapezoid(xw, tw) / norm);
        st.member_norms.push_back(norm);
        st.member_states.push_back(std::move(s));
    }

    double wsum = 0.0;
    for (double c : proj) wsum += c * c;
    if (!(wsum > 0.0)) throw DomainError("target has no overlap with the box states");
    const double wn = std::sqrt(wsum);
    const auto M = ks.size();
    std::vector<double> coef(M);
    for (std::size_t j = 0; j < M; ++j) {
        st.weights.push_back(proj[j] / wn);
        coef[j] = proj[j] / wn / st.member_norms[j];
    }

    // Norm of the superposition computed directly, without assuming orthogonality.
    const auto& grid = st.member_states.front().xbar;
    std::vector<double> phi(grid.size(), 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        for (std::size_t i = 0; i < grid.size(); ++i) phi[i] += coef[j] * st.member_states[j].interior_samples[i];
    }
    std::vector<double> sq(grid.size());
    std::vector<double> sq_well;
    std::vector<double> tp_well;
    std::vector<double> x_well;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sq[i] = phi[i] * phi[i];
        if (grid[i] <= te) {
            x_well.push_back(grid[i]);
            sq_well.push_back(sq[i]);
            tp_well.push_back(phi[i] * st.target(grid[i]));
        }
    }
    double outer = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const auto& si = st.member_states[i];
        for (std::size_t j = 0; j < M; ++j) {
            const auto& sj = st.member_states[j];
            const double amp = coef[i] * coef[j] * si.C * sj.C;
            const double ks_ = si.kbar + sj.kbar;
            const double ps = si.theta + sj.theta;
            double term = (std::sin(ks_ * R + ps) - std::sin(ks_ * X + ps)) / ks_;
            const double kd = si.kbar - sj.kbar;
            const double pd = si.theta - sj.theta;
            if (std::abs(kd) < 1e-12 * ks_) {
                term += (R - X) * std::cos(pd);
            } else {
                term += (std::sin(kd * R + pd) - std::sin(kd * X + pd)) / kd;
            }
            outer += 0.5 * amp * term;
        }
    }
    const double total = numerics::trapezoid(grid, sq) + outer;
    const double in_well = numerics::trapezoid(x_well, sq_well);
    const double ov = numerics::trapezoid(x_well, tp_well);

    const double scale = 1.0 / std::sqrt(total);
    st.amplitudes.resize(M);
    for (std::size_t j = 0; j < M; ++j) st.amplitudes[j] = coef[j] * scale;
    st.confinement_leak = 1.0 - in_well / total;
    st.target_overlap = ov * ov / total;
    return st;
}

SurvivalCurve survival_curve(const Resonance& resonance, const ScaleLaw& law, std::span<const double> times,
                             const PhysicalConstants& consts) {
    consts.validate();
    SurvivalCurve out;
    out.provenance = resonance.origin;
    const double width = resonance.width();
    for (double t : times) {
        const double tau = tau_of_t(law, t);
        const double g = width * tau / consts.hbar;
        out.times.push_back(t);
        out.tau.push_back(tau);
        out.gamma.push_back(g);
        out.P.push_back(std::exp(-g));
    }
    return out;
}

} // namespace scaledecay
