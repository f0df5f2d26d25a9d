#include "monolab/pullback.hpp"

#include "monolab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace monolab {

namespace {

Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }

// Shift of q along one of the real coordinates Re u1, Im u1, Re u2, Im u2.
Point4 shifted(const Point4& q, int axis, double h) {
    Point4 out = q;
    switch (axis) {
        case 0: out.u1 += h; break;
        case 1: out.u1 += cplx(0.0, h); break;
        case 2: out.u2 += h; break;
        default: out.u2 += cplx(0.0, h); break;
    }
    return out;
}

struct PullbackStencil {
    InstantonData c;
    std::array<InstantonData, 4> plus;
    std::array<InstantonData, 4> minus;
    double h;

    template <class Get>
    Mat d(int axis, Get get) const {
        return (get(plus[axis]) - get(minus[axis])) / (2 * h);
    }
    // d/du_j = (d_a - i d_b) / 2 and d/dubar_j = (d_a + i d_b) / 2 with u_j = a + ib.
    template <class Get>
    Mat d_u(int j, Get get) const {
        return 0.5 * (d(2 * j, get) - I * d(2 * j + 1, get));
    }
    template <class Get>
    Mat d_ubar(int j, Get get) const {
        return 0.5 * (d(2 * j, get) + I * d(2 * j + 1, get));
    }
};

PullbackStencil make_stencil(const BundleModel& model, const Point4& q, double h) {
    if (!(h > 0.0)) throw StencilError("finite-difference step must be positive");
    if (!(std::sqrt(q.rho2()) > 2.0 * h)) {
        throw StencilError("stencil at " + q.str() + " reaches the origin of C^2");
    }
    const Chart chart = model.chart_for(hopf_project(q));
    PullbackStencil s;
    s.h = h;
    s.c = pullback_connection(model, q, chart);
    for (int a = 0; a < 4; ++a) {
        for (double sign : {1.0, -1.0}) {
            const Point4 qs = shifted(q, a, sign * h);
            if (!chart_contains(chart, hopf_project(qs))) {
                throw StencilError("stencil at " + q.str() + " leaves chart " + chart_name(chart));
            }
            (sign > 0 ? s.plus : s.minus)[static_cast<std::size_t>(a)] = pullback_connection(model, qs, chart);
        }
    }
    return s;
}

const auto get_u1 = [](const InstantonData& d) { return d.B_u1; };
const auto get_u1bar = [](const InstantonData& d) { return d.B_u1bar; };
const auto get_u2 = [](const InstantonData& d) { return d.B_u2; };
const auto get_u2bar = [](const InstantonData& d) { return d.B_u2bar; };
const auto get_h = [](const InstantonData& d) { return d.h_tilde; };

}  // namespace

InstantonData pullback_connection(const BundleModel& model, const Point4& q) {
    return pullback_connection(model, q, model.chart_for(hopf_project(q)));
}

InstantonData pullback_connection(const BundleModel& model, const Point4& q, Chart chart) {
    if (!(q.rho2() > 0.0)) throw ModelDomainError("pullback_connection: q is the origin of C^2");
    const Point3 p = hopf_project(q);
    const FrameData f = model.frame_data(p, chart);
    const cplx u1 = q.u1, u2 = q.u2;
    const cplx u1b = std::conj(u1), u2b = std::conj(u2);
    // A_t - i phi vanishes identically in a mini-holomorphic frame; grouping it
    // keeps the anti-holomorphic parts exactly zero there.
    const Mat mini_t = f.A_t - I * f.phi;
    const Mat plus_t = f.A_t + I * f.phi;

    InstantonData d;
    d.q = q;
    d.chart = chart;
    d.B_u1 = u1b * plus_t + 2.0 * u2 * f.A_w;
    d.B_u1bar = u1 * mini_t + 2.0 * u2b * f.A_wbar;
    d.B_u2 = -u2b * plus_t + 2.0 * u1 * f.A_w;
    d.B_u2bar = -u2 * mini_t + 2.0 * u1b * f.A_wbar;
    d.h_tilde = f.h;
    return d;
}

double InstantonResidual::max() const { return std::max({f02, f20, contraction}); }

InstantonResidual instanton_residual(const BundleModel& model, const Point4& q, double step) {
    const PullbackStencil s = make_stencil(model, q, step);
    const InstantonData& c = s.c;
    const Mat L = cholesky_factor(c.h_tilde, q.str());

    const Mat F_u1bar_u2bar = s.d_ubar(0, get_u2bar) - s.d_ubar(1, get_u1bar) + comm(c.B_u1bar, c.B_u2bar);
    const Mat F_u1_u2 = s.d_u(0, get_u2) - s.d_u(1, get_u1) + comm(c.B_u1, c.B_u2);
    const Mat F_u1_u1bar = s.d_u(0, get_u1bar) - s.d_ubar(0, get_u1) + comm(c.B_u1, c.B_u1bar);
    const Mat F_u2_u2bar = s.d_u(1, get_u2bar) - s.d_ubar(1, get_u2) + comm(c.B_u2, c.B_u2bar);

    InstantonResidual r;
    r.q = q;
    r.step = step;
    r.f02 = h_operator_norm_chol(F_u1bar_u2bar, L);
    r.f20 = h_operator_norm_chol(F_u1_u2, L);
    r.contraction = h_operator_norm_chol(F_u1_u1bar + F_u2_u2bar, L);
    return r;
}

double pullback_unitarity_residual(const BundleModel& model, const Point4& q, double step) {
    const PullbackStencil s = make_stencil(model, q, step);
    const InstantonData& c = s.c;
    const Mat L = cholesky_factor(c.h_tilde, q.str());
    // Real-direction connection forms: d_a = d_u + d_ubar, d_b = i (d_u - d_ubar).
    const std::array<Mat, 4> B = {
        c.B_u1 + c.B_u1bar,
        I * (c.B_u1 - c.B_u1bar),
        c.B_u2 + c.B_u2bar,
        I * (c.B_u2 - c.B_u2bar),
    };
    double worst = 0.0;
    for (int a = 0; a < 4; ++a) {
        const Mat& Ba = B[static_cast<std::size_t>(a)];
        const Mat defect = s.d(a, get_h) - Ba.adjoint() * c.h_tilde - c.h_tilde * Ba;
        const Mat endo = L.adjoint().triangularView<Eigen::Upper>().solve(
            Mat(L.triangularView<Eigen::Lower>().solve(defect)));
        worst = std::max(worst, h_operator_norm_chol(endo, L));
    }
    return worst;
}

double equivariance_residual(const BundleModel& model, const Point4& q, double theta) {
    const Point4 qr = s1_act(theta, q);
    const Chart chart = model.chart_for(hopf_project(q));
    const InstantonData a = pullback_connection(model, q, chart);
    const InstantonData b = pullback_connection(model, qr, chart);
    const cplx e = std::polar(1.0, theta);
    const cplx eb = std::conj(e);
    const Mat L = cholesky_factor(a.h_tilde, q.str());
    const Mat dh = b.h_tilde - a.h_tilde;
    const Mat dh_endo = L.adjoint().triangularView<Eigen::Upper>().solve(
        Mat(L.triangularView<Eigen::Lower>().solve(dh)));
    return std::max({h_operator_norm_chol(b.B_u1 - eb * a.B_u1, L), h_operator_norm_chol(b.B_u1bar - e * a.B_u1bar, L),
                     h_operator_norm_chol(b.B_u2 - e * a.B_u2, L), h_operator_norm_chol(b.B_u2bar - eb * a.B_u2bar, L),
                     h_operator_norm_chol(dh_endo, L)});
}

ExtensionProbe extension_probe(const BundleModel& model, const std::vector<int>& charges,
                               const std::vector<double>& radii, int n_dirs) {
    if (static_cast<int>(charges.size()) != model.rank()) {
        throw ModelDomainError("extension_probe: " + std::to_string(charges.size()) + " charges for a rank " +
                               std::to_string(model.rank()) + " model");
    }
    if (n_dirs < 1) throw ModelDomainError("extension_probe: n_dirs must be positive");
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] < radii[i - 1])) throw NumericalError("extension_probe: radii must be decreasing");
    }
    const Chart chart = model.has_chart(Chart::Plus) ? Chart::Plus : Chart::Punctured;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<std::pair<double, double>> samples;
    for (double R : radii) {
        const double rho = std::sqrt(R);
        double sup = 0.0;
        for (int j = 0; j < n_dirs; ++j) {
            // |u1| stays away from zero so the projected point lies in A+.
            const double a = 0.5 * std::numbers::pi * (j + 0.5) / n_dirs;
            const Point4 q{std::polar(rho * std::cos(a), golden * j), std::polar(rho * std::sin(a), 2.0 * golden * j + 1.0)};
            const Mat H = model.metric(hopf_project(q), chart);
            Mat g = Mat::Zero(model.rank(), model.rank());
            for (int i = 0; i < model.rank(); ++i) {
                cplx v{1.0, 0.0};
                const int k = charges[static_cast<std::size_t>(i)];
                for (int n = 0; n < std::abs(k); ++n) v *= k > 0 ? q.u1 : 1.0 / q.u1;
                g(i, i) = v;
            }
            const Mat N = g.adjoint() * H * g;
            Eigen::JacobiSVD<Mat> svd(N);
            const auto& sv = svd.singularValues();
            const double smin = sv(sv.size() - 1);
            const double value = sv(0) + (smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity());
            sup = std::max(sup, value);
        }
        samples.emplace_back(R, sup);
    }
    ExtensionProbe out;
    out.charges = charges;
    out.fit = fit_growth(samples);
    out.inverse_fit = fit_inverse_radius(samples);
    return out;
}

}  // namespace monolab
