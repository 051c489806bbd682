#pragma once

namespace ecograde {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` (> 0, may be fractional) degrees of freedom.
double student_t_cdf(double t, double df);

/// P(T > t), accurate in the upper tail.
double student_t_sf(double t, double df);

/// Inverse of student_t_cdf for p in (0, 1).
double student_t_quantile(double p, double df);

}  // namespace ecograde
