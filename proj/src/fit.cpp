#include "monolab/fit.hpp"

#include "monolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monolab {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw NumericalError("linear_fit: need at least two paired samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw NumericalError("linear_fit: abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
    }
    const double scale = std::max(1.0, std::abs(my));
    if (syy <= 1e-24 * scale * scale * n) {
        f.r2 = ss_res <= 1e-20 * scale * scale * n ? 1.0 : 0.0;
    } else {
        f.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return f;
}

bool spans_two_decades(std::span<const double> radii) {
    if (radii.empty()) return false;
    const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
    return *lo > 0.0 && *hi / *lo >= 100.0 * (1.0 - 1e-9);
}

namespace {

void check_samples(const std::vector<std::pair<double, double>>& s) {
    if (s.size() < 4) throw NumericalError("growth fit: need at least 4 samples");
    std::vector<double> r;
    for (const auto& [R, v] : s) r.push_back(R);
    if (!spans_two_decades(r)) throw NumericalError("growth fit: radii must span at least two decades");
}

}  // namespace

GrowthFit fit_growth(std::vector<std::pair<double, double>> samples) {
    check_samples(samples);
    std::vector<std::pair<double, double>> logs;
    for (const auto& [R, v] : samples) {
        if (v > 0.0 && std::isfinite(v)) logs.emplace_back(R, std::log(v));
    }
    if (logs.empty()) {
        GrowthFit g;
        g.exponent = std::numeric_limits<double>::infinity();
        g.constant = -std::numeric_limits<double>::infinity();
        g.fit_quality = 1.0;
        g.samples = std::move(samples);
        return g;
    }
    GrowthFit g = fit_growth_log(std::move(logs));
    g.samples = std::move(samples);
    return g;
}

GrowthFit fit_growth_log(std::vector<std::pair<double, double>> log_samples) {
    if (log_samples.size() < 2) throw NumericalError("growth fit: fewer than two usable samples");
    std::vector<double> x, y;
    for (const auto& [R, lv] : log_samples) {
        x.push_back(std::log(R));
        y.push_back(lv);
    }
    const LinearFit f = linear_fit(x, y);
    GrowthFit g;
    g.exponent = f.slope;
    g.constant = f.intercept;
    g.fit_quality = f.r2;
    for (const auto& [R, lv] : log_samples) g.samples.emplace_back(R, std::exp(lv));
    return g;
}

LinearFit fit_inverse_radius(const std::vector<std::pair<double, double>>& samples) {
    std::vector<double> x, y;
    for (const auto& [R, v] : samples) {
        if (v > 0.0 && std::isfinite(v)) {
            x.push_back(1.0 / R);
            y.push_back(std::log(v));
        }
    }
    return linear_fit(x, y);
}

}  // namespace monolab
