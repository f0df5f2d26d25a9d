#pragma once

#include "monolab/models.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace monolab {

/// Curvature components F = F_tx dt^dx + F_ty dt^dy + F_xy dx^dy assembled from
/// central differences of the connection coefficients.
struct Curvature {
    Mat F_tx;
    Mat F_ty;
    Mat F_xy;
    Mat h;  // metric at the centre, for norms
};

/// Per-component residual norms at one point, in the h-operator norm.
struct ResidualReport {
    Point3 point;
    double step = 0.0;
    std::vector<std::pair<std::string, double>> components;
    double total = 0.0;

    double component(const std::string& name) const;
    /// max of the three Bogomolny components only.
    double bogomolny() const;
};

/// Rejects stencils that come within 2*step of the puncture or of the chart's
/// dropped half-line.
void check_stencil(const BundleModel& model, const Point3& p, double step, Chart chart);

Curvature curvature_fd(const BundleModel& model, const Point3& p, double step);
Curvature curvature_fd(const BundleModel& model, const Point3& p, double step, Chart chart);

/// Residuals of F = *(nabla phi) with *dt = dx^dy, *dx = dy^dt, *dy = dt^dx:
///   bogomolny_xy = |F_xy - nabla_t phi|, bogomolny_yt = |F_yt - nabla_x phi|,
///   bogomolny_tx = |F_tx - nabla_y phi|,
/// plus metric compatibility (unitarity_t, unitarity_w) and the
/// mini-holomorphic commutator.
ResidualReport bogomolny_residual(const BundleModel& model, const Point3& p, double step);
ResidualReport bogomolny_residual(const BundleModel& model, const Point3& p, double step, Chart chart);

/// |[d_wbar + A_wbar, d_t + A_t - i phi]| by central differences.
double commutator_residual(const BundleModel& model, const Point3& p, double step);

struct ConvergenceFit {
    std::vector<double> steps;
    std::vector<double> residuals;
    double order = 0.0;  // +inf when every residual is at the roundoff floor
};

inline constexpr double kResidualFloor = 1e-13;

/// Roundoff level of a first finite difference of O(10) coefficients at the
/// steps used here (~eps * |A| / step); residuals below it show no truncation.
inline constexpr double kRoundoffNoise = 1e-10;

/// Least-squares slope of log(residual) against log(step). Residuals below
/// `floor` are excluded.
ConvergenceFit convergence_order(const std::function<double(double)>& sampler, const std::vector<double>& steps,
                                 double floor = kResidualFloor);

}  // namespace monolab
