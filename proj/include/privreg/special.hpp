// Scalar special functions backing the statistical audits: regularized
// incomplete gamma (series + continued fraction), its inverse, chi-square
// tail probability, and the standard normal density/CDF.
#pragma once

namespace privreg {

// Regularized lower incomplete gamma P(a, x); P(a, 0) = 0, P(a, inf) = 1.
double gamma_p(double a, double x);

// Upper tail Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// Inverse of P(a, .): returns x with gamma_p(a, x) = p.
double gamma_p_inv(double a, double p);

// Survival function of a chi-square with `dof` degrees of freedom.
double chi_square_sf(double stat, int dof);

double normal_pdf(double x);
double normal_cdf(double x);

}  // namespace privreg
