#pragma once

#include "funrate/common.hpp"

namespace funrate::stats {

/// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
/// Continued-fraction evaluation, absolute error well below 1e-12.
double incomplete_beta(double a, double b, double x);

/// CDF of the F(d1, d2) distribution at x >= 0.
double f_cdf(double x, int d1, int d2);

/// CDF of Student's t with dof degrees of freedom.
double t_cdf(double x, int dof);

/// Quantile of Student's t: smallest x with t_cdf(x) >= p, p in (0,1).
double t_quantile(double p, int dof);

}  // namespace funrate::stats
