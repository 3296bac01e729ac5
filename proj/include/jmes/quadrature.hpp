#pragma once

// Adaptive quadrature: Gauss-Kronrod 7-15 panels with recursive bisection,
// plus the adaptive Simpson rule used for copula cdf integrals.

#include <functional>

namespace jmes::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;    // accumulated error estimate
    long evaluations = 0;  // function evaluations spent
    bool converged = true;
};

using Fn = std::function<double(double)>;

// Single GK15 panel on [a,b]; kronrod and gauss estimates.
void gk15_panel(const Fn& f, double a, double b, double* kronrod, double* gauss);

// Adaptive Gauss-Kronrod on [a,b]; stops when the per-panel error estimate
// summed over panels is below max(abs_tol, rel_tol * |integral|).
Result adaptive_gk(const Fn& f, double a, double b, double abs_tol = 1e-12,
                   double rel_tol = 1e-10, int max_depth = 48);

// Adaptive Simpson to an absolute tolerance.
Result adaptive_simpson(const Fn& f, double a, double b, double abs_tol = 1e-8,
                        int max_depth = 50);

}  // namespace jmes::quad
