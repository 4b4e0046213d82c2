#pragma once

namespace adaptci {

double normal_pdf(double x);
double normal_cdf(double x);

/// Inverse of the standard normal CDF. Acklam's rational approximation
/// followed by one Halley step; absolute error below 1e-13 on (0, 1).
/// Throws std::domain_error outside (0, 1).
double normal_quantile(double p);

/// Two-sided critical value z with P(|Z| <= z) = level.
double normal_critical_value(double level);

/// P(X > h, Y > k) for standard bivariate normal (X, Y) with correlation r,
/// using Genz's Gauss-Legendre scheme (absolute error around 1e-15).
double bivariate_normal_upper(double h, double k, double r);

}  // namespace adaptci
