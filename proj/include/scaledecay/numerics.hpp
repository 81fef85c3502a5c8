#pragma once

// Small numerical kernels shared by the solvers: quadrature, bracketed root
// finding, bracketed minimisation and a tridiagonal solve.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace scaledecay::numerics {

/// Trapezoid rule over a strictly increasing, possibly non-uniform grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

/// Composite Simpson on a uniform grid; falls back to a trapezoid end panel for an odd panel count.
double simpson_uniform(double h, std::span<const double> y);

/// Bisection on [lo, hi] where f(lo) and f(hi) differ in sign. Stops when the
/// bracket is below `xtol` or after `max_iter` halvings.
double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol,
              int max_iter = 200);

struct Minimum {
    double x = 0.0;
    double f = 0.0;
    int evaluations = 0;
};

/// Golden-section search accelerated by parabolic steps (Brent). The bracket
/// [lo, hi] must contain one interior minimum; `rel_tol` is relative to |x|.
Minimum minimize_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double rel_tol = 1e-10, int max_iter = 500);

/// Vertex of the parabola through three points; returns x1 if they are collinear.
double parabola_vertex(double x0, double f0, double x1, double f1, double x2, double f2);

/// Solves a tridiagonal system in place (Thomas algorithm).
/// `lower[i]` couples row i to i-1 (lower[0] unused), `upper[i]` couples row i to i+1.
void solve_tridiagonal(std::span<const std::complex<double>> lower,
                       std::span<const std::complex<double>> diag,
                       std::span<const std::complex<double>> upper,
                       std::span<std::complex<double>> rhs,
                       std::vector<std::complex<double>>& scratch);

/// Linear interpolation on a strictly increasing grid; zero outside [x.front(), x.back()].
std::complex<double> interpolate(std::span<const double> x, std::span<const std::complex<double>> y,
                                 double at);

/// `count` evenly spaced values from `lo` to `hi` inclusive.
std::vector<double> linspace(double lo, double hi, int count);

} // namespace scaledecay::numerics
