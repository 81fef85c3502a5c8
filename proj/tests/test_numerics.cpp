#include "catch_amalgamated.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "scaledecay/numerics.hpp"

using namespace scaledecay;
using Catch::Approx;

TEST_CASE("trapezoid integrates piecewise linear data exactly", "[numerics]") {
    const std::vector<double> x{0.0, 0.5, 1.5, 2.0, 4.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(3.0 * xi - 1.0);
    CHECK(numerics::trapezoid(x, y) == Approx(3.0 * 8.0 - 4.0).epsilon(1e-14));
}

TEST_CASE("simpson is exact for cubics and converges at fourth order", "[numerics]") {
    const int n = 65;
    const double h = 2.0 / (n - 1);
    std::vector<double> cubic(n), smooth(n), smooth_half((n - 1) / 2 + 1);
    for (int i = 0; i < n; ++i) {
        const double x = i * h;
        cubic[i] = x * x * x - 2.0 * x + 1.0;
        smooth[i] = std::exp(std::sin(x));
    }
    CHECK(numerics::simpson_uniform(h, cubic) == Approx(4.0 - 4.0 + 2.0).epsilon(1e-13));

    for (int i = 0; i < static_cast<int>(smooth_half.size()); ++i) smooth_half[i] = smooth[2 * i];
    // Reference from a much finer trapezoid with end correction.
    const int m = 200001;
    const double hm = 2.0 / (m - 1);
    double ref = 0.0;
    for (int i = 0; i < m; ++i) ref += (i == 0 || i == m - 1 ? 0.5 : 1.0) * std::exp(std::sin(i * hm));
    ref *= hm;
    ref -= hm * hm / 12.0 * (std::cos(2.0) * std::exp(std::sin(2.0)) - 1.0);
    const double e1 = std::abs(numerics::simpson_uniform(2.0 * h, smooth_half) - ref);
    const double e2 = std::abs(numerics::simpson_uniform(h, smooth) - ref);
    CHECK(std::log2(e1 / e2) > 3.7);
}

TEST_CASE("bisect finds a bracketed root", "[numerics]") {
    const double r = numerics::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
    CHECK(r == Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK_THROWS(numerics::bisect([](double x) { return x * x + 1.0; }, 0.0, 2.0, 1e-12));
}

TEST_CASE("minimize_bracketed locates an interior minimum", "[numerics]") {
    const auto m = numerics::minimize_bracketed([](double x) { return std::cosh(x - 1.3) + 0.25; }, 0.0, 3.0);
    CHECK(m.x == Approx(1.3).epsilon(1e-8));
    CHECK(m.f == Approx(1.25).epsilon(1e-14));
    CHECK(m.evaluations > 0);
}

TEST_CASE("parabola_vertex", "[numerics]") {
    auto f = [](double x) { return 2.0 * (x - 0.7) * (x - 0.7) + 5.0; };
    CHECK(numerics::parabola_vertex(0.0, f(0.0), 0.4, f(0.4), 1.9, f(1.9)) == Approx(0.7).epsilon(1e-13));
    CHECK(numerics::parabola_vertex(0.0, 1.0, 1.0, 2.0, 2.0, 3.0) == 1.0);
}

TEST_CASE("solve_tridiagonal matches a dense residual", "[numerics]") {
    using c = std::complex<double>;
    const int n = 40;
    std::vector<c> lo(n), di(n), up(n), x(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = c(-1.0, 0.1 * i);
        up[i] = c(-1.0, -0.05 * i);
        di[i] = c(4.0 + 0.01 * i, 0.3);
        x[i] = c(std::sin(0.3 * i), std::cos(0.7 * i));
    }
    for (int i = 0; i < n; ++i) {
        rhs[i] = di[i] * x[i];
        if (i > 0) rhs[i] += lo[i] * x[i - 1];
        if (i + 1 < n) rhs[i] += up[i] * x[i + 1];
    }
    std::vector<c> scratch;
    numerics::solve_tridiagonal(lo, di, up, rhs, scratch);
    for (int i = 0; i < n; ++i) CHECK(std::abs(rhs[i] - x[i]) < 1e-13);
}

TEST_CASE("interpolate and linspace", "[numerics]") {
    const auto x = numerics::linspace(-1.0, 1.0, 5);
    REQUIRE(x.size() == 5);
    CHECK(x.front() == -1.0);
    CHECK(x.back() == 1.0);
    CHECK(x[2] == Approx(0.0).margin(1e-15));

    std::vector<std::complex<double>> y;
    for (double xi : x) y.emplace_back(2.0 * xi, -xi);
    const auto v = numerics::interpolate(x, y, 0.3);
    CHECK(v.real() == Approx(0.6));
    CHECK(v.imag() == Approx(-0.3));
    CHECK(numerics::interpolate(x, y, 1.5) == std::complex<double>(0.0, 0.0));
}
