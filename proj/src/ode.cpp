#include "monolab/ode.hpp"

#include "monolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace monolab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b*, where b* is the embedded fourth-order row.
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 - (-92097.0 / 339200), e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

constexpr double kRescaleHigh = 1e50;
constexpr double kRescaleLow = 1e-50;

/// Error relative to each column's own size: the flow is linear and
/// homogeneous, so columns are independent solutions that may grow or decay
/// at different rates, and each must be resolved relative to itself.
double relative_error(const Mat& err, const Mat& y, const Mat& y_new) {
    double worst = 0.0;
    const double overall = std::max(max_abs(y), max_abs(y_new));
    for (Eigen::Index j = 0; j < err.cols(); ++j) {
        double size = std::max(y.col(j).cwiseAbs().maxCoeff(), y_new.col(j).cwiseAbs().maxCoeff());
        if (!(size > 1e-280 * overall)) size = overall;
        if (!(size > 0.0)) continue;
        worst = std::max(worst, err.col(j).cwiseAbs().maxCoeff() / size);
    }
    return worst;
}

}  // namespace

LinearFlowResult integrate_linear_flow(const std::function<Mat(double)>& generator, double t0, double t1, Mat Y0,
                                       const LinearFlowOptions& opts, const std::vector<double>& sample_times) {
    if (!(opts.tol > 0.0)) throw NumericalError("integrate_linear_flow: tolerance must be positive");
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        const double s = sample_times[i];
        if (dir * (s - t0) < 0.0 || dir * (t1 - s) < 0.0) {
            throw NumericalError("integrate_linear_flow: sample time outside the integration interval");
        }
        if (i && dir * (s - sample_times[i - 1]) < 0.0) {
            throw NumericalError("integrate_linear_flow: sample times must be ordered along the flow");
        }
    }

    LinearFlowResult res;
    res.Y = std::move(Y0);
    double t = t0;
    std::size_t next_sample = 0;
    auto record_samples = [&]() {
        while (next_sample < sample_times.size() && dir * (sample_times[next_sample] - t) <= 0.0) {
            res.samples.push_back({t, res.Y, res.log_scale});
            ++next_sample;
        }
    };
    record_samples();
    if (span == 0.0) return res;

    auto cap = [&](double at) {
        double m = span;
        if (opts.max_step) m = std::min(m, opts.max_step(at));
        if (!(m > 0.0)) throw NumericalError("integrate_linear_flow: non-positive step bound at t=" + std::to_string(at));
        return m;
    };
    const double floor = 1e-14 * std::max(span, std::abs(t0)) + 1e-300;
    double h = 0.1 * cap(t);
    Mat k1 = generator(t) * res.Y;

    while (dir * (t1 - t) > 0.0) {
        double target = t1;
        if (next_sample < sample_times.size()) target = sample_times[next_sample];
        h = std::min({h, cap(t), std::abs(target - t)});
        const bool hits_target = h >= std::abs(target - t) * (1.0 - 1e-14);
        if (h < floor) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "integrator step fell below %.3g at t=%.17g; tolerance %.3g not achievable",
                          floor, t, opts.tol);
            throw NumericalError(buf);
        }
        const double hs = dir * h;
        const Mat& y = res.Y;
        const Mat k2 = generator(t + c2 * hs) * (y + hs * (a21 * k1));
        const Mat k3 = generator(t + c3 * hs) * (y + hs * (a31 * k1 + a32 * k2));
        const Mat k4 = generator(t + c4 * hs) * (y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const Mat k5 = generator(t + c5 * hs) * (y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double t_new = hits_target ? target : t + hs;
        const Mat k6 = generator(t + hs) * (y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Mat y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Mat k7 = generator(t_new) * y_new;
        const Mat err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double err_norm = relative_error(err, y, y_new) / opts.tol;
        if (!std::isfinite(err_norm)) {
            throw NumericalError("integrate_linear_flow: non-finite state near t=" + std::to_string(t));
        }
        if (err_norm <= 1.0) {
            t = t_new;
            res.Y = y_new;
            k1 = k7;
            res.max_local_error = std::max(res.max_local_error, err_norm * opts.tol);
            ++res.accepted;
            const double big = max_abs(res.Y);
            if (big > kRescaleHigh || (big < kRescaleLow && big > 0.0)) {
                res.Y /= big;
                k1 /= big;
                res.log_scale += std::log(big);
            }
            record_samples();
        } else {
            ++res.rejected;
        }
        const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        h *= factor;
    }
    return res;
}

}  // namespace monolab
