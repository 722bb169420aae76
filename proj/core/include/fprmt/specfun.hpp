#pragma once

// Scalar special functions used by the analytic formulas. Everything here is
// pure and thread-safe. Domain violations throw std::domain_error.

namespace fprmt::specfun {

double erf(double x);
double erfc(double x);

/// log Γ(x) for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(s, x) = γ(s, x) / Γ(s).
double reg_gamma_p(double s, double x);
/// Regularized upper incomplete gamma Q(s, x) = Γ(s, x) / Γ(s).
double reg_gamma_q(double s, double x);

/// log P(s, x) and log Q(s, x); finite wherever the value is positive, even
/// when the value itself underflows.
double log_reg_gamma_p(double s, double x);
double log_reg_gamma_q(double s, double x);

/// Modified Bessel function of the second kind K_ν(x), ν real, x > 0.
/// K is even in ν. Underflows to 0 for large x; use log_bessel_k there.
double bessel_k(double nu, double x);
double log_bessel_k(double nu, double x);

}  // namespace fprmt::specfun
