#pragma once

namespace bilat {

/// Regularised incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
/// Continued fraction (modified Lentz) on whichever side converges fast.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T > t) for Student's t with `df` > 0 degrees of freedom (df need not be integral).
double student_t_sf(double t, double df);
double student_t_cdf(double t, double df);

/// P(Z > z) for the standard normal.
double normal_sf(double z);

}  // namespace bilat
