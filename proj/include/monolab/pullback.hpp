#pragma once

#include "monolab/fit.hpp"
#include "monolab/models.hpp"

#include <vector>

namespace monolab {

/// Pulled-back connection on C^2 split over du1, dubar1, du2, dubar2, in the
/// pull-back of the chart frame at hopf_project(q).
struct InstantonData {
    Point4 q;
    Chart chart = Chart::Punctured;
    Mat B_u1;
    Mat B_u1bar;
    Mat B_u2;
    Mat B_u2bar;
    Mat h_tilde;
};

/// phi^* nabla + i xi (x) phi^* Higgs, with xi = -u1 dubar1 + ubar1 du1 - ubar2 du2 + u2 dubar2.
InstantonData pullback_connection(const BundleModel& model, const Point4& q);
InstantonData pullback_connection(const BundleModel& model, const Point4& q, Chart chart);

struct InstantonResidual {
    Point4 q;
    double step = 0.0;
    double f02 = 0.0;          // |F_{ubar1 ubar2}|
    double f20 = 0.0;          // |F_{u1 u2}|
    double contraction = 0.0;  // |F_{u1 ubar1} + F_{u2 ubar2}|

    double max() const;
};

/// Curvature of the pulled-back connection by central differences in the four
/// real coordinates of C^2; norms in the h_tilde operator norm.
InstantonResidual instanton_residual(const BundleModel& model, const Point4& q, double step);

/// Metric compatibility of (B, h_tilde) in the real directions Re u1, Im u1,
/// Re u2, Im u2; the largest defect in the h_tilde operator norm.
double pullback_unitarity_residual(const BundleModel& model, const Point4& q, double step);

/// Difference between the data at s1_act(theta, q) and the data at q
/// transported by the circle action (B_u1 -> e^{-i theta} B_u1,
/// B_u1bar -> e^{i theta} B_u1bar, B_u2 -> e^{i theta} B_u2,
/// B_u2bar -> e^{-i theta} B_u2bar, h_tilde unchanged).
double equivariance_residual(const BundleModel& model, const Point4& q, double theta);

struct ExtensionProbe {
    GrowthFit fit;           // log quantity against log R, R = rho^2
    LinearFit inverse_fit;   // log quantity against 1/R
    std::vector<int> charges;
};

/// Sup over n_dirs directions of |N| + |N^{-1}| where N is the pulled-back
/// metric in the frame u1^{k_i} (pulled-back A+ frame), sampled on the spheres
/// |q|^2 = R for each R in `radii` (decreasing, two decades).
ExtensionProbe extension_probe(const BundleModel& model, const std::vector<int>& charges,
                               const std::vector<double>& radii, int n_dirs);

}  // namespace monolab
