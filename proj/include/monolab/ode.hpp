#pragma once

#include "monolab/linalg.hpp"

#include <functional>
#include <vector>

namespace monolab {

/// Dormand-Prince 5(4) integrator for the linear matrix flow dY/dt = G(t) Y.
///
/// The state is renormalised whenever its largest entry leaves [1e-50, 1e50];
/// the removed factor accumulates in `log_scale`, so Y_true = exp(log_scale) Y.
/// This keeps sections that grow like exp(1/R) representable.
struct LinearFlowOptions {
    double tol = 1e-10;
    /// Upper bound on |step| as a function of t (e.g. a fraction of the
    /// distance to a singularity).
    std::function<double(double)> max_step;
};

struct FlowSample {
    double t = 0.0;
    Mat Y;
    double log_scale = 0.0;
};

struct LinearFlowResult {
    Mat Y;
    double log_scale = 0.0;
    double max_local_error = 0.0;  // largest accepted local error estimate, relative
    int accepted = 0;
    int rejected = 0;
    std::vector<FlowSample> samples;
};

/// Integrates from t0 to t1 (either direction). Each entry of `sample_times`
/// must lie between t0 and t1 and be ordered from t0 towards t1; the state is
/// recorded there. Throws NumericalError when the step falls below the floor.
LinearFlowResult integrate_linear_flow(const std::function<Mat(double)>& generator, double t0, double t1, Mat Y0,
                                       const LinearFlowOptions& opts, const std::vector<double>& sample_times = {});

}  // namespace monolab
