#pragma once

#include <vector>

namespace lomef {

/// Regularized incomplete beta I_x(a, b) (continued fraction, modified Lentz).
double incomplete_beta(double a, double b, double x);

/// Student-t cumulative distribution function with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

double mean(const std::vector<double>& values);
/// Sample standard deviation (n - 1 denominator).
double sample_sd(const std::vector<double>& values);

/// Linear interpolation between order statistics (R's type 7).
double quantile(std::vector<double> values, double p);
double median(std::vector<double> values);

}  // namespace lomef
