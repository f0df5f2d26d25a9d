#include "monolab/diffcheck.hpp"

#include "monolab/errors.hpp"
#include "monolab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monolab {

namespace {

Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }

// Frame data on the 7-point stencil around p.
struct Stencil {
    FrameData c;
    FrameData tp, tm, xp, xm, yp, ym;
    double h;

    template <class Get>
    Mat d_t(Get get) const { return (get(tp) - get(tm)) / (2 * h); }
    template <class Get>
    Mat d_x(Get get) const { return (get(xp) - get(xm)) / (2 * h); }
    template <class Get>
    Mat d_y(Get get) const { return (get(yp) - get(ym)) / (2 * h); }
};

Stencil make_stencil(const BundleModel& model, const Point3& p, double h, Chart chart) {
    check_stencil(model, p, h, chart);
    auto at = [&](double dt, double dx, double dy) {
        return model.frame_data(Point3{p.t + dt, p.w + cplx(dx, dy)}, chart);
    };
    return Stencil{at(0, 0, 0), at(h, 0, 0), at(-h, 0, 0), at(0, h, 0),
                   at(0, -h, 0), at(0, 0, h), at(0, 0, -h), h};
}

const auto get_At = [](const FrameData& f) { return f.A_t; };
const auto get_Ax = [](const FrameData& f) { return f.A_x(); };
const auto get_Ay = [](const FrameData& f) { return f.A_y(); };
const auto get_phi = [](const FrameData& f) { return f.phi; };
const auto get_h = [](const FrameData& f) { return f.h; };
const auto get_Mt = [](const FrameData& f) { return Mat(f.A_t - I * f.phi); };
const auto get_Mwbar = [](const FrameData& f) { return f.A_wbar; };

Curvature curvature_from(const Stencil& s) {
    const Mat At = s.c.A_t, Ax = s.c.A_x(), Ay = s.c.A_y();
    Curvature F;
    F.F_tx = s.d_t(get_Ax) - s.d_x(get_At) + comm(At, Ax);
    F.F_ty = s.d_t(get_Ay) - s.d_y(get_At) + comm(At, Ay);
    F.F_xy = s.d_x(get_Ay) - s.d_y(get_Ax) + comm(Ax, Ay);
    F.h = s.c.h;
    return F;
}

double commutator_from(const Stencil& s, const Mat& L) {
    const Mat dwbar_Mt = 0.5 * (s.d_x(get_Mt) + I * s.d_y(get_Mt));
    const Mat dt_Mwbar = s.d_t(get_Mwbar);
    const Mat Mt = get_Mt(s.c);
    const Mat Mwbar = s.c.A_wbar;
    return h_operator_norm_chol(dwbar_Mt - dt_Mwbar + comm(Mwbar, Mt), L);
}

}  // namespace

double ResidualReport::component(const std::string& name) const {
    for (const auto& [k, v] : components) {
        if (k == name) return v;
    }
    throw Error("ResidualReport: no component " + name);
}

double ResidualReport::bogomolny() const {
    return std::max({component("bogomolny_xy"), component("bogomolny_yt"), component("bogomolny_tx")});
}

void check_stencil(const BundleModel& model, const Point3& p, double step, Chart chart) {
    if (!(step > 0.0)) throw StencilError("finite-difference step must be positive");
    if (!model.has_chart(chart)) {
        throw ModelDomainError(model.label() + " has no chart " + chart_name(chart));
    }
    if (!(p.radius() > 2.0 * step)) {
        throw StencilError("stencil at " + p.str() + " with step " + std::to_string(step) + " reaches the puncture");
    }
    if (!(chart_boundary_distance(chart, p) > 2.0 * step)) {
        throw StencilError("stencil at " + p.str() + " comes within 2*step of the boundary of chart " +
                           chart_name(chart));
    }
}

Curvature curvature_fd(const BundleModel& model, const Point3& p, double step) {
    return curvature_fd(model, p, step, model.chart_for(p));
}

Curvature curvature_fd(const BundleModel& model, const Point3& p, double step, Chart chart) {
    return curvature_from(make_stencil(model, p, step, chart));
}

ResidualReport bogomolny_residual(const BundleModel& model, const Point3& p, double step) {
    return bogomolny_residual(model, p, step, model.chart_for(p));
}

ResidualReport bogomolny_residual(const BundleModel& model, const Point3& p, double step, Chart chart) {
    const Stencil s = make_stencil(model, p, step, chart);
    const Curvature F = curvature_from(s);
    const FrameData& c = s.c;
    const Mat L = cholesky_factor(c.h, p.str());

    const Mat Dt_phi = s.d_t(get_phi) + comm(c.A_t, c.phi);
    const Mat Dx_phi = s.d_x(get_phi) + comm(c.A_x(), c.phi);
    const Mat Dy_phi = s.d_y(get_phi) + comm(c.A_y(), c.phi);
    const Mat F_yt = -F.F_ty;

    // Metric compatibility d_mu h = A_mu^* h + h A_mu, measured as an
    // endomorphism h^{-1}(...).
    auto unitarity = [&](const Mat& dh, const Mat& A) {
        const Mat defect = dh - A.adjoint() * c.h - c.h * A;
        const Mat endo = L.adjoint().triangularView<Eigen::Upper>().solve(
            Mat(L.triangularView<Eigen::Lower>().solve(defect)));
        return h_operator_norm_chol(endo, L);
    };

    ResidualReport r;
    r.point = p;
    r.step = step;
    r.components = {
        {"bogomolny_xy", h_operator_norm_chol(F.F_xy - Dt_phi, L)},
        {"bogomolny_yt", h_operator_norm_chol(F_yt - Dx_phi, L)},
        {"bogomolny_tx", h_operator_norm_chol(F.F_tx - Dy_phi, L)},
        {"unitarity_t", unitarity(s.d_t(get_h), c.A_t)},
        {"unitarity_w", std::max(unitarity(s.d_x(get_h), c.A_x()), unitarity(s.d_y(get_h), c.A_y()))},
        {"commutator", commutator_from(s, L)},
    };
    r.total = 0.0;
    for (const auto& [k, v] : r.components) r.total = std::max(r.total, v);
    return r;
}

double commutator_residual(const BundleModel& model, const Point3& p, double step) {
    const Stencil s = make_stencil(model, p, step, model.chart_for(p));
    return commutator_from(s, cholesky_factor(s.c.h, p.str()));
}

ConvergenceFit convergence_order(const std::function<double(double)>& sampler, const std::vector<double>& steps,
                                 double floor) {
    if (steps.size() < 3) throw NumericalError("convergence_order: need at least 3 steps");
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (!(steps[i] < steps[i - 1])) throw NumericalError("convergence_order: steps must be strictly decreasing");
    }
    ConvergenceFit fit;
    fit.steps = steps;
    std::vector<double> x, y;
    for (double h : steps) {
        const double r = sampler(h);
        if (!(r >= 0.0)) throw NumericalError("convergence_order: sampler returned a negative or NaN residual");
        fit.residuals.push_back(r);
        if (r >= floor) {
            x.push_back(std::log(h));
            y.push_back(std::log(r));
        }
    }
    if (x.size() < 2) {
        fit.order = std::numeric_limits<double>::infinity();
        return fit;
    }
    fit.order = linear_fit(x, y).slope;
    return fit;
}

}  // namespace monolab
