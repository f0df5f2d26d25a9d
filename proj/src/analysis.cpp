#include "monolab/analysis.hpp"

#include "monolab/errors.hpp"
#include "monolab/ode.hpp"
#include "monolab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace monolab {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

/// L^{-*} applied from the right: M L^{-*}.
Mat right_inv_adj(const Mat& M, const Mat& L) {
    // M L^{-*} = (L^{-1} M^*)^*
    return L.triangularView<Eigen::Lower>().solve(M.adjoint()).adjoint();
}

/// L^{-1} M.
Mat left_inv(const Mat& L, const Mat& M) { return L.triangularView<Eigen::Lower>().solve(M); }

/// The chart used to integrate along {w} x [t_a, t_b]: one that contains the
/// whole closed segment.
Chart integration_chart(const BundleModel& model, cplx w, double t_a, double t_b) {
    const double lo = std::min(t_a, t_b);
    const double hi = std::max(t_a, t_b);
    const bool on_axis = w == cplx(0.0, 0.0);
    if (model.charts() == ChartSet::Punctured) {
        if (on_axis && lo <= 0.0 && hi >= 0.0) {
            throw ModelDomainError("scatter: segment at w=0 over [" + fmt(lo) + ", " + fmt(hi) +
                                   "] passes through the puncture");
        }
        return Chart::Punctured;
    }
    if (on_axis) {
        if (lo > 0.0) return Chart::Plus;
        if (hi < 0.0) return Chart::Minus;
        throw ModelDomainError("scatter: segment at w=0 over [" + fmt(lo) + ", " + fmt(hi) +
                               "] meets the dropped half-line of every chart");
    }
    return t_a + t_b >= 0.0 ? Chart::Plus : Chart::Minus;
}

/// Flow of (nabla_t - i phi) s = 0 in a chart frame sigma, or in its
/// h-orthonormal version u = sigma L^{-*} (h = L L^*, coefficients eta = L^* xi).
/// The orthonormal frame reads off |s|_h = |eta| without forming h, which
/// under- or overflows for metrics like exp(-1/R).
struct SegmentFlow {
    const BundleModel& model;
    cplx w;
    Chart chart;

    Mat generator(double t) const {
        const Point3 p{t, w};
        const FrameData fd = model.frame_data(p, chart);
        const Mat L = cholesky_factor(fd.h, p.str());
        const Mat dh = fd.A_t.adjoint() * fd.h + fd.h * fd.A_t;
        // X = L^{-1} dh L^{-*}; L^{-1} dL is lower triangular with real diagonal.
        const Mat X = right_inv_adj(left_inv(L, dh), L);
        Mat Phi = X.triangularView<Eigen::StrictlyLower>();
        for (Eigen::Index i = 0; i < X.rows(); ++i) Phi(i, i) = 0.5 * X(i, i).real();
        const Mat core = L.adjoint() * right_inv_adj(I * fd.phi - fd.A_t, L);
        return Phi.adjoint() + core;
    }

    /// Generator i phi - A_t of the coefficient flow in the chart frame itself.
    Mat chart_generator(double t) const {
        const FrameData fd = model.frame_data(Point3{t, w}, chart);
        return I * fd.phi - fd.A_t;
    }

    Mat chol(double t) const {
        const Point3 p{t, w};
        return cholesky_factor(model.metric(p, chart), p.str());
    }

    LinearFlowOptions options(double tol) const {
        LinearFlowOptions opts;
        opts.tol = tol;
        opts.max_step = [this](double t) {
            return std::min(0.1, 0.25 * chart_boundary_distance(chart, Point3{t, w}));
        };
        return opts;
    }

    LinearFlowResult run(double t0, double t1, const Mat& eta0, double tol, const std::vector<double>& samples) const {
        return integrate_linear_flow([this](double t) { return generator(t); }, t0, t1, eta0, options(tol), samples);
    }

    LinearFlowResult run_chart(double t0, double t1, const Mat& xi0, double tol) const {
        return integrate_linear_flow([this](double t) { return chart_generator(t); }, t0, t1, xi0, options(tol));
    }
};

double column_norm(const Mat& Y, Eigen::Index j) { return Y.col(j).norm(); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ChargeVector round_charges(std::vector<double> raw) {
    std::sort(raw.begin(), raw.end());
    ChargeVector cv;
    cv.raw = raw;
    for (double r : raw) {
        const double k = std::round(r);
        cv.charges.push_back(std::isfinite(k) ? static_cast<int>(k) : 0);
        cv.spread = std::max(cv.spread, std::isfinite(r) ? std::abs(r - k) : std::numeric_limits<double>::infinity());
    }
    std::sort(cv.charges.begin(), cv.charges.end());
    return cv;
}

void require_decades(const std::vector<double>& radii, const char* who) {
    if (radii.size() < 4 || !spans_two_decades(radii)) {
        throw NumericalError(std::string(who) + ": radii must contain >= 4 values spanning >= 2 decades");
    }
    for (double r : radii) {
        if (!(r > 0.0)) throw NumericalError(std::string(who) + ": radii must be positive");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

ScatteringMatrix scatter(const BundleModel& model, cplx w, double t_from, double t_to, double tol) {
    if (!(tol > 0.0)) throw NumericalError("scatter: tolerance must be positive");
    const Chart chart = integration_chart(model, w, t_from, t_to);
    const Point3 p_from{t_from, w};
    const Point3 p_to{t_to, w};
    ScatteringMatrix out;
    out.w = w;
    out.t_from = t_from;
    out.t_to = t_to;
    out.chart_from = model.chart_for(p_from);
    out.chart_to = model.chart_for(p_to);
    out.tol = 0.0;

    const SegmentFlow flow{model, w, chart};
    const Eigen::Index r = model.rank();
    const LinearFlowResult res = flow.run_chart(t_from, t_to, identity(r), tol);
    const Mat S_int = res.Y * std::exp(res.log_scale);
    out.matrix = model.transition(p_to, chart, out.chart_to) * S_int * model.transition(p_from, out.chart_from, chart);
    out.tol = res.max_local_error;
    return out;
}

std::vector<FlowPoint> mini_section_flow(const BundleModel& model, cplx w, double t_from, double t_stop, const Vec& s0,
                                         const std::vector<double>& sample_ts, double tol) {
    if (s0.size() != model.rank()) throw NumericalError("mini_section_flow: s0 has the wrong length");
    const Chart chart = integration_chart(model, w, t_from, t_stop);
    const Point3 p_from{t_from, w};
    const SegmentFlow flow{model, w, chart};
    const Vec xi = model.transition(p_from, model.chart_for(p_from), chart) * s0;
    const Mat eta0 = flow.chol(t_from).adjoint() * xi;
    const LinearFlowResult res = flow.run(t_from, t_stop, eta0, tol, sample_ts);
    std::vector<FlowPoint> out;
    out.reserve(res.samples.size());
    for (const FlowSample& s : res.samples) {
        const double n = column_norm(s.Y, 0);
        FlowPoint fp;
        fp.point = Point3{s.t, w};
        fp.log_norm = std::log(n) + s.log_scale;
        fp.norm = std::exp(fp.log_norm);
        out.push_back(fp);
    }
    return out;
}

std::vector<FlowPoint> mini_section_flow(const BundleModel& model, cplx w, double t_from, double t_stop, const Vec& s0,
                                         int n_samples, double tol) {
    if (n_samples < 1) throw NumericalError("mini_section_flow: need at least one sample");
    std::vector<double> ts;
    for (int i = 1; i <= n_samples; ++i) {
        ts.push_back(i == n_samples ? t_stop : t_from + (t_stop - t_from) * i / n_samples);
    }
    return mini_section_flow(model, w, t_from, t_stop, s0, ts, tol);
}

ChargeVector scattering_pole_orders(const BundleModel& model, double eps, const std::vector<double>& radii, int n_args,
                                    double tol) {
    require_decades(radii, "scattering_pole_orders");
    if (n_args < 8) throw NumericalError("scattering_pole_orders: need at least 8 arguments per circle");
    const Eigen::Index r = model.rank();
    std::vector<std::vector<double>> mean_log(static_cast<std::size_t>(r));
    std::vector<double> log_r;
    for (double rad : radii) {
        std::vector<double> acc(static_cast<std::size_t>(r), 0.0);
        for (int k = 0; k < n_args; ++k) {
            const double arg = 2.0 * std::numbers::pi * (k + 0.5) / n_args;
            const Mat S = scatter(model, std::polar(rad, arg), -eps, eps, tol).matrix;
            Eigen::JacobiSVD<Mat> svd(S);
            Eigen::VectorXd sv = svd.singularValues();
            std::sort(sv.data(), sv.data() + sv.size());
            for (Eigen::Index i = 0; i < r; ++i) acc[static_cast<std::size_t>(i)] += std::log(sv(i));
        }
        for (Eigen::Index i = 0; i < r; ++i) {
            mean_log[static_cast<std::size_t>(i)].push_back(acc[static_cast<std::size_t>(i)] / n_args);
        }
        log_r.push_back(std::log(rad));
    }
    std::vector<double> raw;
    for (const auto& ys : mean_log) raw.push_back(linear_fit(log_r, ys).slope);
    ChargeVector cv = round_charges(raw);
    if (!(cv.spread < 0.5)) {
        throw ExtractionError("scattering_pole_orders: non-integer exponents (spread " + fmt(cv.spread) +
                                  "); the scattering map is not meromorphic at w = 0",
                              cv);
    }
    return cv;
}

// ---------------------------------------------------------------------------

std::vector<Ray> default_rays() {
    std::vector<Ray> rays{{0.0, 0.0}};
    for (double polar : {std::numbers::pi / 6, std::numbers::pi / 3, std::numbers::pi / 2}) {
        for (int k = 0; k < 3; ++k) rays.push_back({polar, 2.0 * std::numbers::pi * k / 3 + 0.25});
    }
    return rays;
}

const char* growth_class_name(GrowthClass c) {
    switch (c) {
        case GrowthClass::polynomial: return "polynomial";
        case GrowthClass::superpolynomial_decay: return "superpolynomial_decay";
        case GrowthClass::superpolynomial_growth: return "superpolynomial_growth";
        case GrowthClass::irregular: return "irregular";
    }
    return "?";
}

GrowthClass classify_growth(const GrowthFit& fit, const LinearFit& inverse_fit) {
    const bool inverse_growth =
        inverse_fit.slope > 0.0 && inverse_fit.r2 >= 0.99 && inverse_fit.r2 > fit.fit_quality;
    if (std::isfinite(fit.exponent) && fit.fit_quality >= 0.99 && !inverse_growth) return GrowthClass::polynomial;
    if (std::isinf(fit.exponent) && fit.exponent > 0.0) return GrowthClass::superpolynomial_decay;  // vanishes
    if (inverse_growth) return GrowthClass::superpolynomial_growth;
    if (inverse_fit.slope <= 0.0 && fit.exponent > 0.0) return GrowthClass::superpolynomial_decay;
    return GrowthClass::irregular;
}

namespace {

struct SideGrowth {
    std::vector<SectionGrowth> sections;
    /// Per side, the fit of the h-operator norm of the flow map from t0: the
    /// sup over all sections, independent of the choice of starting basis.
    std::vector<GrowthFit> operator_fits;
};

double log_operator_norm(const Mat& Y, const Mat& ref_inv, double log_scale) {
    const Eigen::JacobiSVD<Mat> svd(Y * ref_inv);
    return std::log(svd.singularValues()(0)) + log_scale;
}

SideGrowth section_growth(const BundleModel& model, double eps, const std::vector<Ray>& rays,
                          const std::vector<double>& radii, double tol) {
    const Eigen::Index r = model.rank();
    SideGrowth result;
    std::vector<SectionGrowth>& out = result.sections;
    for (int side : {-1, 1}) {
        const double t0 = side * eps;
        // log of the sup over rays, per basis section and radius
        std::vector<std::vector<double>> sup_log(static_cast<std::size_t>(r),
                                                 std::vector<double>(radii.size(), -std::numeric_limits<double>::infinity()));
        std::vector<double> op_log(radii.size(), -std::numeric_limits<double>::infinity());
        // Starting coefficients are measured in h at (t0, 0), so that a constant
        // change of frame leaves the operator norm unchanged.
        const Point3 ref{t0, cplx{0.0, 0.0}};
        const Mat ref_inv =
            cholesky_factor(model.metric(ref, model.chart_for(ref)), ref.str()).adjoint().inverse();
        for (const Ray& ray : rays) {
            const cplx dir = std::polar(std::sin(ray.polar), ray.w_arg);
            const double tdir = side * std::cos(ray.polar);
            const bool on_axis = std::abs(dir) < 1e-15;
            auto absorb = [&](std::size_t ri, const Mat& Y, double log_scale) {
                op_log[ri] = std::max(op_log[ri], log_operator_norm(Y, ref_inv, log_scale));
                for (Eigen::Index j = 0; j < r; ++j) {
                    const double ln = std::log(column_norm(Y, j)) + log_scale;
                    auto& slot = sup_log[static_cast<std::size_t>(j)][ri];
                    slot = std::max(slot, ln);
                }
            };
            auto fail = [&](double closest, const Error& e) {
                throw NumericalError("condition_D_check: integration failed on side " + std::to_string(side) +
                                     " (closest achieved R=" + fmt(closest) + "): " + e.what());
            };
            if (on_axis) {
                const cplx w{0.0, 0.0};
                const Chart chart = integration_chart(model, w, t0, tdir * radii.back());
                const SegmentFlow flow{model, w, chart};
                const Point3 p0{t0, w};
                const Mat eta0 = flow.chol(t0).adjoint() * model.transition(p0, model.chart_for(p0), chart);
                std::vector<double> ts;
                for (double R : radii) ts.push_back(tdir * R);
                std::vector<std::size_t> order(radii.size());
                for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
                // samples must be ordered from t0 towards the puncture
                std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });
                std::vector<double> sorted_ts;
                for (std::size_t i : order) sorted_ts.push_back(ts[i]);
                try {
                    const LinearFlowResult res = flow.run(t0, sorted_ts.back(), eta0, tol, sorted_ts);
                    for (std::size_t k = 0; k < order.size(); ++k) {
                        absorb(order[k], res.samples[k].Y, res.samples[k].log_scale);
                    }
                } catch (const Error& e) {
                    fail(eps, e);
                }
                continue;
            }
            double closest = eps;
            for (std::size_t ri = 0; ri < radii.size(); ++ri) {
                const double R = radii[ri];
                const cplx w = R * dir;
                const double t1 = R * tdir;
                try {
                    const Chart chart = integration_chart(model, w, t0, t1);
                    const SegmentFlow flow{model, w, chart};
                    const Point3 p0{t0, w};
                    const Mat eta0 = flow.chol(t0).adjoint() * model.transition(p0, model.chart_for(p0), chart);
                    const LinearFlowResult res = flow.run(t0, t1, eta0, tol, {});
                    absorb(ri, res.Y, res.log_scale);
                    closest = std::min(closest, R);
                } catch (const Error& e) {
                    fail(closest, e);
                }
            }
        }
        for (Eigen::Index j = 0; j < r; ++j) {
            SectionGrowth sg;
            sg.side = side;
            sg.index = static_cast<int>(j);
            std::vector<std::pair<double, double>> logs;
            std::vector<std::pair<double, double>> vals;
            for (std::size_t ri = 0; ri < radii.size(); ++ri) {
                const double ln = sup_log[static_cast<std::size_t>(j)][ri];
                logs.emplace_back(radii[ri], ln);
                vals.emplace_back(radii[ri], std::exp(ln));
            }
            sg.fit = fit_growth_log(logs);
            std::vector<double> x, y;
            for (const auto& [R, ln] : logs) {
                x.push_back(1.0 / R);
                y.push_back(ln);
            }
            sg.inverse_fit = linear_fit(x, y);
            sg.growth = classify_growth(sg.fit, sg.inverse_fit);
            out.push_back(std::move(sg));
        }
        std::vector<std::pair<double, double>> op;
        for (std::size_t ri = 0; ri < radii.size(); ++ri) op.emplace_back(radii[ri], op_log[ri]);
        result.operator_fits.push_back(fit_growth_log(op));
    }
    return result;
}

GrowthFit most_negative(const std::vector<GrowthFit>& fits) {
    GrowthFit best;
    bool first = true;
    for (const auto& f : fits) {
        if (first || f.exponent < best.exponent) {
            best = f;
            first = false;
        }
    }
    return best;
}

}  // namespace

ConditionDReport condition_D_check(const BundleModel& model, double eps, const std::vector<Ray>& rays,
                                   const std::vector<double>& radii, double tol) {
    require_decades(radii, "condition_D_check");
    if (!(eps > 0.0)) throw NumericalError("condition_D_check: epsilon must be positive");
    if (rays.empty()) throw NumericalError("condition_D_check: no rays");
    for (double R : radii) {
        if (R > eps) throw NumericalError("condition_D_check: radii must not exceed epsilon");
    }
    for (const Ray& ray : rays) {
        if (ray.polar < 0.0 || ray.polar > std::numbers::pi / 2 + 1e-12) {
            throw NumericalError("condition_D_check: ray polar angle must lie in [0, pi/2]");
        }
    }
    ConditionDReport rep;
    SideGrowth bundle = section_growth(model, eps, rays, radii, tol);
    rep.sections = std::move(bundle.sections);
    // The dual flow uses a dual model built over a non-owning handle.
    const ModelPtr handle(ModelPtr{}, &model);
    const ModelPtr dm = dual(handle);
    SideGrowth dual_side = section_growth(*dm, eps, rays, radii, tol);
    rep.dual_sections = std::move(dual_side.sections);
    rep.E_exponent = most_negative(bundle.operator_fits);
    rep.dual_exponent = most_negative(dual_side.operator_fits);
    rep.passes = std::all_of(rep.sections.begin(), rep.sections.end(), [](const SectionGrowth& s) {
                     return s.bounded_polynomially();
                 }) &&
                 std::all_of(rep.dual_sections.begin(), rep.dual_sections.end(),
                             [](const SectionGrowth& s) { return s.bounded_polynomially(); });
    return rep;
}

// ---------------------------------------------------------------------------

double higgs_norm(const BundleModel& model, const Point3& p, Chart chart) {
    const FrameData fd = model.frame_data(p, chart);
    return h_operator_norm(fd.phi, fd.h);
}

double sup_on_sphere(const BundleModel& model, double R, int n_samples, const PointQuantity& quantity,
                     std::uint64_t seed) {
    double best = 0.0;
    for (const auto& dir : sphere_directions(n_samples, seed)) {
        const Point3 p = scaled_point(dir, R);
        best = std::max(best, quantity(model, p, model.chart_for(p)));
    }
    return best;
}

double sup_on_sphere(const BundleModel& model, double R, int n_samples, std::uint64_t seed) {
    return sup_on_sphere(model, R, n_samples, higgs_norm, seed);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::dirac: return "dirac";
        case Verdict::not_dirac: return "not_dirac";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Classification classify_dirac(const BundleModel& model, const std::vector<double>& radii, int n_samples, double tol,
                              std::uint64_t seed, double eps, bool attach) {
    Classification c;
    try {
        std::vector<std::pair<double, double>> samples;
        for (double R : radii) samples.emplace_back(R, sup_on_sphere(model, R, n_samples, seed));
        c.phi_fit = fit_growth(std::move(samples));
    } catch (const Error& e) {
        c.verdict = Verdict::inconclusive;
        c.note = e.what();
        return c;
    }
    const GrowthFit& f = c.phi_fit;
    if (f.exponent >= -1.0 - tol && f.fit_quality >= 0.99) {
        c.verdict = Verdict::dirac;
    } else if (f.exponent < -1.0 - 3.0 * tol) {
        c.verdict = Verdict::not_dirac;
    } else {
        c.verdict = Verdict::inconclusive;
    }
    if (c.verdict == Verdict::dirac && attach) {
        try {
            c.condition_d = condition_D_check(model, eps, default_rays(), radii);
        } catch (const Error& e) {
            c.note += std::string("condition_d: ") + e.what();
        }
        try {
            c.charges = extract_charges(model, radii, n_samples, seed);
        } catch (const Error& e) {
            if (!c.note.empty()) c.note += "; ";
            c.note += std::string("charges: ") + e.what();
        }
    }
    return c;
}

ChargeVector extract_charges(const BundleModel& model, const std::vector<double>& radii, int n_samples,
                             std::uint64_t seed) {
    require_decades(radii, "extract_charges");
    const Eigen::Index r = model.rank();
    const auto dirs = sphere_directions(n_samples, seed);
    std::vector<std::vector<double>> medians(static_cast<std::size_t>(r));
    for (double R : radii) {
        std::vector<std::vector<double>> per(static_cast<std::size_t>(r));
        for (const auto& dir : dirs) {
            const Point3 p = scaled_point(dir, R);
            const FrameData fd = model.frame_data(p, model.chart_for(p));
            const Eigen::VectorXd ev = h_selfadjoint_eigenvalues(2.0 * R * (-I * fd.phi), fd.h);
            for (Eigen::Index i = 0; i < r; ++i) per[static_cast<std::size_t>(i)].push_back(ev(i));
        }
        for (Eigen::Index i = 0; i < r; ++i) {
            medians[static_cast<std::size_t>(i)].push_back(median(per[static_cast<std::size_t>(i)]));
        }
    }
    std::vector<double> raw;
    for (const auto& m : medians) raw.push_back(linear_fit(radii, m).intercept);
    ChargeVector cv = round_charges(raw);
    if (!(cv.spread < 0.5)) {
        throw ExtractionError("extract_charges: eigenvalues of 2R(-i phi) do not approach integers (spread " +
                                  fmt(cv.spread) + ")",
                              cv);
    }
    return cv;
}

// ---------------------------------------------------------------------------

namespace {

/// Constant frame change P bringing the model close to the diagonal reference
/// at p: eigenvectors of -i phi sorted by eigenvalue, orthonormalised inside
/// degenerate groups, projected to the nearest unitary.
Mat alignment(const BundleModel& model, const Point3& p, Chart chart) {
    const FrameData fd = model.frame_data(p, chart);
    const Mat L = cholesky_factor(fd.h, p.str());
    Mat K = L.adjoint() * right_inv_adj(-I * fd.phi, L);
    K = 0.5 * (K + K.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(K);
    const Eigen::VectorXd lam = es.eigenvalues();
    Mat V = L.adjoint().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    const Eigen::Index r = V.cols();
    const double scale = 1.0 + lam.cwiseAbs().maxCoeff();
    for (Eigen::Index start = 0; start < r;) {
        Eigen::Index end = start + 1;
        while (end < r && lam(end) - lam(end - 1) < 1e-8 * scale) ++end;
        for (Eigen::Index j = start; j < end; ++j) {
            for (Eigen::Index k = start; k < j; ++k) V.col(j) -= V.col(k).dot(V.col(j)) * V.col(k);
            V.col(j).normalize();
        }
        start = end;
    }
    Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

Chart comparison_chart(const BundleModel& model, const BundleModel& ref, const Point3& p) {
    const Chart c = ref.chart_for(p);
    return model.has_chart(c) ? c : model.chart_for(p);
}

}  // namespace

AsymptoticsReport asymptotics_check(const BundleModel& model, const std::vector<int>& charges,
                                    const std::vector<double>& radii, int n_samples, std::uint64_t seed) {
    if (static_cast<Eigen::Index>(charges.size()) != model.rank()) {
        throw NumericalError("asymptotics_check: " + std::to_string(charges.size()) + " charges for a rank " +
                             std::to_string(model.rank()) + " model");
    }
    require_decades(radii, "asymptotics_check");
    AsymptoticsReport rep;
    rep.charges = charges;
    std::sort(rep.charges.begin(), rep.charges.end());
    std::vector<ModelPtr> parts;
    for (int k : rep.charges) parts.push_back(dirac_model(k));
    const ModelPtr ref = parts.size() == 1 ? parts.front() : direct_sum(parts);

    const double r_out = *std::max_element(radii.begin(), radii.end());
    const Point3 north{r_out, 0.0};
    const Point3 south{-r_out, 0.0};
    const Mat P_north = alignment(model, north, comparison_chart(model, *ref, north));
    const Mat P_south = alignment(model, south, comparison_chart(model, *ref, south));

    const auto dirs = sphere_directions(n_samples, seed);
    std::vector<std::pair<double, double>> p1_samples, grad_samples;
    for (double R : radii) {
        double p1 = 0.0;
        double grad = 0.0;
        double grad_noise = 0.0;
        for (const auto& dir : dirs) {
            const Point3 p = scaled_point(dir, R);
            const Chart rc = ref->chart_for(p);
            const Chart mc = comparison_chart(model, *ref, p);
            const Mat& P = rc == Chart::Minus ? P_south : P_north;
            const Mat Pinv = P.adjoint();
            const FrameData fd = model.frame_data(p, mc);
            const FrameData f1 = ref->frame_data(p, rc);
            const Mat h = P.adjoint() * fd.h * P;
            const Mat Lh = cholesky_factor(h, p.str());
            const Mat a = f1.h.ldlt().solve(h);
            p1 = std::max(p1, h_operator_norm_chol(a - identity(a.rows()), Lh));
            rep.p2_sup = std::max(rep.p2_sup, h_operator_norm_chol(Pinv * fd.phi * P - f1.phi, Lh));
            rep.p3_sup[0] = std::max(rep.p3_sup[0], h_operator_norm_chol(Pinv * fd.A_t * P - f1.A_t, Lh));
            rep.p3_sup[1] = std::max(rep.p3_sup[1], h_operator_norm_chol(Pinv * fd.A_w * P - f1.A_w, Lh));
            rep.p3_sup[2] = std::max(rep.p3_sup[2], h_operator_norm_chol(Pinv * fd.A_wbar * P - f1.A_wbar, Lh));

            // nabla(R phi) = d(R phi) + [A, R phi] by central differences, step 1e-4 R.
            const double d = 1e-4 * R;
            const Mat rphi = R * fd.phi;
            const Mat Lm = cholesky_factor(fd.h, p.str());
            const std::array<Point3, 3> steps{Point3{d, 0.0}, Point3{0.0, cplx(d, 0.0)}, Point3{0.0, cplx(0.0, d)}};
            const std::array<Mat, 3> conn{fd.A_t, fd.A_x(), fd.A_y()};
            for (int mu = 0; mu < 3; ++mu) {
                const Point3 pp{p.t + steps[mu].t, p.w + steps[mu].w};
                const Point3 pm{p.t - steps[mu].t, p.w - steps[mu].w};
                const Mat fp = pp.radius() * model.frame_data(pp, mc).phi;
                const Mat fm = pm.radius() * model.frame_data(pm, mc).phi;
                const Mat cov = (fp - fm) / (2.0 * d) + conn[mu] * rphi - rphi * conn[mu];
                grad = std::max(grad, h_operator_norm_chol(cov, Lm));
                // Roundoff of the difference quotient: a few ulps of R phi over 2d.
                grad_noise = std::max(grad_noise, 64.0 * std::numeric_limits<double>::epsilon() *
                                                      h_operator_norm_chol(rphi, Lm) / (2.0 * d));
            }
        }
        // Differences at the roundoff level carry no trend.
        p1_samples.emplace_back(R, p1 < kAsymptoticsFloor ? 0.0 : p1);
        grad_samples.emplace_back(R, grad < std::max(kAsymptoticsFloor, grad_noise) ? 0.0 : grad);
        rep.grad_rphi_sup = std::max(rep.grad_rphi_sup, grad);
    }
    rep.p1_fit = fit_growth(p1_samples);
    rep.p1_exponent = rep.p1_fit.exponent;
    rep.grad_rphi_fit = fit_growth(grad_samples);
    return rep;
}

}  // namespace monolab
