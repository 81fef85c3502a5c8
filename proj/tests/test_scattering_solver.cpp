#include "catch_amalgamated.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "scaledecay/analytic_models.hpp"
#include "scaledecay/numerics.hpp"
#include "scaledecay/potential.hpp"
#include "scaledecay/scattering_solver.hpp"

using namespace scaledecay;
using Catch::Approx;

namespace {

const PhysicalConstants kUnit{1.0, 1.0};

// Reference C^2 for a smooth potential: classical RK4 with a tiny step.
double rk4_C2(const std::function<double(double)>& V, double X, double k, const PhysicalConstants& c) {
    const int n = 200000;
    const double h = X / n;
    const double g = c.two_m_over_hbar2();
    auto rhs = [&](double x, std::array<double, 2> y) {
        return std::array<double, 2>{y[1], (g * V(x) - k * k) * y[0]};
    };
    std::array<double, 2> y{0.0, k};
    for (int i = 0; i < n; ++i) {
        const double x = i * h;
        const auto k1 = rhs(x, y);
        const auto k2 = rhs(x + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
        const auto k3 = rhs(x + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
        const auto k4 = rhs(x + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
        y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    return y[0] * y[0] + y[1] * y[1] / (k * k);
}

} // namespace

TEST_CASE("integrated C2 agrees with the closed forms", "[solver]") {
    const DeltaModel dm{kUnit, 50.0, 1.0};
    const auto dpot = RescaledPotential::from(dm);
    for (double k : {0.4, 2.9, 3.1, 6.0}) {
        const auto s = integrate_state(dpot, kUnit, k);
        CHECK(s.C * s.C == Approx(delta_C2(dm, k)).epsilon(1e-8));
    }
    const BarrierModel bm{{0.8, 1.2}, 20.0, 1.0, 2.0};
    const auto bpot = RescaledPotential::from(bm);
    for (double k : {0.7, 2.70, 5.29, 7.5}) {
        const auto s = integrate_state(bpot, bm.consts, k);
        CHECK(s.C * s.C == Approx(barrier_C2(bm, k)).epsilon(1e-7));
    }
}

TEST_CASE("smooth generic potential agrees with a fine RK4 reference", "[solver]") {
    auto V = [](double x) { return 30.0 * std::exp(-40.0 * (x - 1.2) * (x - 1.2)); };
    const auto pot = RescaledPotential::generic(V, 1.0, 2.0);
    for (double k : {1.1, 3.7}) {
        const auto s = integrate_state(pot, kUnit, k);
        CHECK(s.C * s.C == Approx(rk4_C2(V, 2.0, k, kUnit)).epsilon(1e-8));
    }
}

TEST_CASE("scattering state continues analytically past the support", "[solver]") {
    const auto pot = RescaledPotential::delta(20.0, 1.0);
    const auto s = integrate_state(pot, kUnit, 2.3);
    CHECK(s.evaluate(1.0 + 1e-12) == Approx(s.value_end).epsilon(1e-9));
    CHECK(s.evaluate(5.0) == Approx(s.C * std::cos(2.3 * 5.0 + s.theta)).epsilon(1e-12));
    CHECK(s.evaluate(0.3) == Approx(std::sin(2.3 * 0.3)).epsilon(1e-6));
    int sign_changes = 0;
    for (std::size_t i = 1; i < s.interior_samples.size(); ++i) {
        if (s.interior_samples[i] * s.interior_samples[i - 1] < 0.0) ++sign_changes;
    }
    CHECK(s.node_count == sign_changes);
    CHECK_THROWS_AS(integrate_state(pot, kUnit, 2.3, 0.2), ResolutionError);
    CHECK_THROWS_AS(integrate_state(pot, kUnit, -1.0), DomainError);
}

TEST_CASE("threaded scan is identical to the serial scan", "[solver]") {
    const auto pot = RescaledPotential::delta(50.0, 1.0);
    const auto a = scan_C2(pot, kUnit, 0.1, 10.0, 301, kDefaultGridStep, 1);
    const auto b = scan_C2(pot, kUnit, 0.1, 10.0, 301, kDefaultGridStep, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].kbar == b[i].kbar);
        CHECK(a[i].C2 == b[i].C2);
    }
    CHECK(a.front().kbar == 0.1);
    CHECK(a.back().kbar == 10.0);
}

TEST_CASE("locate_minima on synthetic data", "[solver]") {
    auto f = [](double k) { return 2.0 + std::cos(2.0 * k) + 0.1 * k; };
    std::vector<C2Sample> scan;
    for (int i = 0; i <= 200; ++i) {
        const double k = 0.05 * i;
        scan.push_back({k, f(k)});
    }
    const auto coarse = locate_minima(scan);
    const auto fine = locate_minima(scan, f);
    REQUIRE(coarse.size() == 3);
    REQUIRE(fine.size() == 3);
    for (int n = 0; n < 3; ++n) {
        // f' = -2 sin(2k) + 0.1 = 0 on the rising branch.
        const double expect = pi / 2.0 + n * pi - 0.5 * std::asin(0.05);
        CHECK(fine[n].kbar == Approx(expect).epsilon(1e-7));
        CHECK(coarse[n].kbar == Approx(expect).epsilon(1e-3));
        CHECK(fine[n].lo < fine[n].kbar);
        CHECK(fine[n].kbar < fine[n].hi);
    }
}

TEST_CASE("quadratic model fit recovers exact parameters", "[solver]") {
    const double F = 0.013;
    const double G = 4.2;
    const double d = -2e-3;
    std::vector<double> E;
    std::vector<double> C2;
    for (int i = 0; i < 41; ++i) {
        const double e = 10.0 + (i - 20) * 2e-4;
        E.push_back(e);
        C2.push_back(G * G * (e - 10.0 + d) * (e - 10.0 + d) + F * F);
    }
    const auto fit = fit_quadratic_model(E, C2, 10.0);
    CHECK(fit.F == Approx(F).epsilon(1e-8));
    CHECK(fit.G == Approx(G).epsilon(1e-8));
    CHECK(fit.delta_shift == Approx(d).epsilon(1e-8));
    CHECK(fit.residual < 1e-8);
}

TEST_CASE("fitted delta resonance matches the closed form at large strength", "[solver]") {
    const DeltaModel dm{kUnit, 500.0, 1.0};
    const auto pot = RescaledPotential::from(dm);
    const auto scan = scan_C2(pot, kUnit, 2.5, 3.8, 131);
    const auto minima = locate_minima(scan, [&](double k) {
        const auto s = integrate_state(pot, kUnit, k);
        return s.C * s.C;
    });
    REQUIRE(minima.size() == 1);
    const auto analytic = delta_resonance(dm, 1);
    FitOptions opt;
    opt.anchor_kbar = analytic.kbar_n;
    const auto fit = fit_resonance(pot, kUnit, minima.front(), 0.0, opt);
    CHECK(fit.residual < 1e-3);
    CHECK(fit.resonance.origin == Provenance::fitted);
    CHECK(fit.resonance.F == Approx(analytic.F).epsilon(5e-3));
    CHECK(fit.resonance.G == Approx(analytic.G).epsilon(5e-3));
    CHECK(fit.resonance.delta_shift == Approx(analytic.delta_shift).epsilon(5e-3));
    const double E_min = kUnit.energy_of(fit.kbar_min);
    CHECK(fit.window_lo < E_min);
    CHECK(E_min < fit.window_hi);
}

TEST_CASE("box assembly confines the state inside the well", "[solver]") {
    const DeltaModel dm{kUnit, 100.0, 1.0};
    const auto pot = RescaledPotential::from(dm);
    const auto res = delta_resonance(dm, 1);
    const auto st = assemble_confined_state(pot, kUnit, res, 100.0, 201);
    CHECK(st.confinement_leak < 0.05);
    CHECK(st.target_overlap > 0.9);
    CHECK(st.member_states.size() == 201);

    // Unit norm, checked on a dense grid independent of the assembly.
    const auto x = numerics::linspace(0.0, 100.0, 400001);
    std::vector<double> sq;
    double in_well = 0.0;
    for (double xi : x) sq.push_back(st.evaluate(xi) * st.evaluate(xi));
    for (std::size_t i = 0; x[i] <= 1.0; ++i) in_well += (i == 0 ? 0.5 : 1.0) * sq[i] * (x[1] - x[0]);
    CHECK(numerics::trapezoid(x, sq) == Approx(1.0).epsilon(1e-3));
    CHECK(1.0 - in_well == Approx(st.confinement_leak).margin(2e-3));

    CHECK_THROWS_AS(assemble_confined_state(pot, kUnit, res, 10.0, 201), BoxTooSmall);
    CHECK_THROWS_AS(assemble_confined_state(pot, kUnit, res, 100.0, 200), DomainError);
}

TEST_CASE("barrier target continues evanescently into the barrier", "[solver]") {
    const BarrierModel bm{kUnit, 20.0, 1.0, 2.0};
    const auto pot = RescaledPotential::from(bm);
    const auto res = barrier_resonance(bm, 2);
    const auto st = assemble_confined_state(pot, kUnit, res, 100.0, 101);
    CHECK(st.target_end == 2.0);
    CHECK(st.target_decay == Approx(*res.kprime_n).epsilon(1e-12));
    CHECK(st.target(1.0 - 1e-12) == Approx(st.target(1.0 + 1e-12)).epsilon(1e-9));
    CHECK(st.target(2.5) == 0.0);
    CHECK(st.target_overlap > 0.9);
}

TEST_CASE("survival curve is exp(-gamma)", "[solver]") {
    Resonance r;
    r.F = 0.01;
    r.G = 2.0;
    const ScaleLaw law(1.0, 0.1);
    const std::vector<double> t{0.0, 5.0, 50.0};
    const auto curve = survival_curve(r, law, t, kUnit);
    REQUIRE(curve.P.size() == 3);
    CHECK(curve.P[0] == 1.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(curve.gamma[i] == Approx(0.01 * tau_of_t(law, t[i])).margin(1e-15));
        CHECK(curve.P[i] == Approx(std::exp(-curve.gamma[i])));
    }
}
