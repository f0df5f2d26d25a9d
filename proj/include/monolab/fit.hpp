#pragma once

#include <span>
#include <utility>
#include <vector>

namespace monolab {

/// Ordinary least squares y = slope * x + intercept; r2 is the coefficient of
/// determination (1 for an exact fit, including constant data).
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Power-law fit value ~ exp(constant) * R^exponent by log-log regression.
struct GrowthFit {
    double exponent = 0.0;
    double constant = 0.0;
    double fit_quality = 0.0;
    std::vector<std::pair<double, double>> samples;  // (R, value)
};

/// Requires >= 4 samples spanning >= 2 decades of R. Zero values are dropped
/// from the regression; if every value is zero the quantity vanishes
/// identically and exponent = +inf with fit_quality = 1.
GrowthFit fit_growth(std::vector<std::pair<double, double>> samples);

/// Regression of log(value) against 1/R. A positive slope with high r2 marks
/// growth like exp(slope / R), faster than any power of R.
LinearFit fit_inverse_radius(const std::vector<std::pair<double, double>>& samples);

/// Regression of log(value) against log(R) over explicit log values, for
/// quantities that overflow double precision.
GrowthFit fit_growth_log(std::vector<std::pair<double, double>> log_samples);

bool spans_two_decades(std::span<const double> radii);

}  // namespace monolab
