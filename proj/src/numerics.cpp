#include "scaledecay/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scaledecay::numerics {

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

double simpson_uniform(double h, std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (y[0] + y[1]);
    // Simpson needs an even number of panels; the last odd panel gets a trapezoid.
    const std::size_t panels = n - 1;
    const std::size_t even = panels - (panels % 2);
    double sum = y[0] + y[even];
    for (std::size_t i = 1; i < even; ++i) sum += (i % 2 ? 4.0 : 2.0) * y[i];
    double result = sum * h / 3.0;
    if (even != panels) result += 0.5 * h * (y[n - 2] + y[n - 1]);
    return result;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol,
              int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect: root not bracketed");
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double parabola_vertex(double x0, double f0, double x1, double f1, double x2, double f2) {
    const double d1 = (x1 - x0) * (f1 - f2);
    const double d2 = (x1 - x2) * (f1 - f0);
    const double denom = 2.0 * (d1 - d2);
    if (denom == 0.0) return x1;
    return x1 - ((x1 - x0) * d1 - (x1 - x2) * d2) / denom;
}

Minimum minimize_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double rel_tol, int max_iter) {
    constexpr double golden = 0.3819660112501051;
    constexpr double tiny = 1e-300;
    double a = std::min(lo, hi);
    double b = std::max(lo, hi);
    double x = a + golden * (b - a);
    double w = x;
    double v = x;
    double fx = f(x);
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;
    int evals = 1;

    for (int iter = 0; iter < max_iter; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol = rel_tol * std::abs(x) + tiny;
        const double tol2 = 2.0 * tol;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

        bool golden_step = true;
        if (std::abs(e) > tol) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if ((u - a) < tol2 || (b - u) < tol2) d = (m >= x) ? tol : -tol;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x >= m) ? a - x : b - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol) ? x + d : x + (d > 0.0 ? tol : -tol);
        const double fu = f(u);
        ++evals;
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx, evals};
}

void solve_tridiagonal(std::span<const std::complex<double>> lower,
                       std::span<const std::complex<double>> diag,
                       std::span<const std::complex<double>> upper,
                       std::span<std::complex<double>> rhs,
                       std::vector<std::complex<double>>& scratch) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    scratch.resize(n);
    // Explicit reciprocal: library complex division is several times slower.
    auto reciprocal = [](std::complex<double> z) {
        const double d = std::norm(z);
        if (d == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
        return std::complex<double>(z.real() / d, -z.imag() / d);
    };
    std::complex<double> inv = reciprocal(diag[0]);
    rhs[0] *= inv;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = upper[i - 1] * inv;
        inv = reciprocal(diag[i] - lower[i] * scratch[i]);
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) * inv;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

std::complex<double> interpolate(std::span<const double> x, std::span<const std::complex<double>> y,
                                 double at) {
    if (x.empty() || at < x.front() || at > x.back()) return {0.0, 0.0};
    auto it = std::upper_bound(x.begin(), x.end(), at);
    if (it == x.end()) return y.back();
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    if (hi == 0) return y.front();
    const std::size_t lo = hi - 1;
    const double f = (at - x[lo]) / (x[hi] - x[lo]);
    return (1.0 - f) * y[lo] + f * y[hi];
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 0) return out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) out.push_back(lo + step * i);
    out.back() = hi;
    return out;
}

} // namespace scaledecay::numerics
