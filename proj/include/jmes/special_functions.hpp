#pragma once

// Scalar special functions backing the distribution layer: regularized
// incomplete gamma/beta with inverses, normal cdf/quantile, Student t
// cdf/pdf/quantile for real degrees of freedom.

namespace jmes::sf {

// Standard normal cdf Phi(x).
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

// Inverse of Phi to ~1e-15 relative accuracy (rational approximation
// refined by one Newton step on the cdf).
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a,x), a > 0, x >= 0.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

// Solve P(a,x) = p for x (bisection-safeguarded Newton).
double gamma_p_inverse(double a, double p);

// Regularized incomplete beta I_x(a,b).
double incomplete_beta(double a, double b, double x);

// Student t cdf/pdf/quantile with real nu > 0.
double student_t_cdf(double x, double nu);
double student_t_pdf(double x, double nu);
double student_t_quantile(double p, double nu);

}  // namespace jmes::sf
