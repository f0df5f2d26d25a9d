#include "monolab/models.hpp"

#include "monolab/errors.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace monolab {

namespace {

cplx ipow(cplx z, int n) {
    cplx out{1.0, 0.0};
    const cplx base = n >= 0 ? z : 1.0 / z;
    for (int i = 0; i < std::abs(n); ++i) out *= base;
    return out;
}

// R + t and R - t without cancellation near the opposite half-axis.
struct AxisSplit {
    double R;
    double r_plus;   // R + t
    double r_minus;  // R - t
};

AxisSplit axis_split(const Point3& p) {
    const double R = p.radius();
    const double w2 = std::norm(p.w);
    if (p.t >= 0.0) {
        const double rp = R + p.t;
        return {R, rp, rp > 0.0 ? w2 / rp : 0.0};
    }
    const double rm = R - p.t;
    return {R, rm > 0.0 ? w2 / rm : 0.0, rm};
}

Mat scalar(cplx v) { return Mat::Constant(1, 1, v); }

Mat inverse_of(const Mat& g, const Point3& p, const char* what) {
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible()) {
        throw ModelDomainError(std::string(what) + " is singular at " + p.str());
    }
    return lu.inverse();
}

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

const char* chart_name(Chart c) {
    switch (c) {
        case Chart::Plus: return "A+";
        case Chart::Minus: return "A-";
        case Chart::Punctured: return "U*";
    }
    return "?";
}

bool chart_set_has(ChartSet s, Chart c) {
    return s == ChartSet::Punctured ? c == Chart::Punctured : c != Chart::Punctured;
}

double chart_boundary_distance(Chart c, const Point3& p) {
    switch (c) {
        case Chart::Plus: return p.t <= 0.0 ? std::abs(p.w) : p.radius();
        case Chart::Minus: return p.t >= 0.0 ? std::abs(p.w) : p.radius();
        case Chart::Punctured: return p.radius();
    }
    return 0.0;
}

bool chart_contains(Chart c, const Point3& p) { return chart_boundary_distance(c, p) > 0.0; }

MetricJet finite_difference_jet(const MetricFunction& H, const Point3& p, double eta) {
    const double h = eta * p.radius();
    if (!(h > 0.0)) throw ModelDomainError("finite_difference_jet: point at the origin");
    auto at = [&](double dt, double dx, double dy) {
        Mat v = H(Point3{p.t + dt, p.w + cplx(dx, dy)});
        if (!v.allFinite()) {
            throw NumericalError("derivative oracle failed near " + p.str());
        }
        return v;
    };
    MetricJet jet;
    jet.H = at(0, 0, 0);
    jet.dH_t = (at(h, 0, 0) - at(-h, 0, 0)) / (2.0 * h);
    const Mat dx = (at(0, h, 0) - at(0, -h, 0)) / (2.0 * h);
    const Mat dy = (at(0, 0, h) - at(0, 0, -h)) / (2.0 * h);
    jet.dH_w = 0.5 * (dx - I * dy);
    return jet;
}

FrameData frame_calculus(const MetricJet& jet, Chart chart, const Point3* where) {
    const Mat L = cholesky_factor(jet.H, where ? where->str() : std::string{});
    auto solve = [&](const Mat& rhs) {
        Mat y = L.triangularView<Eigen::Lower>().solve(rhs);
        return Mat(L.adjoint().triangularView<Eigen::Upper>().solve(y));
    };
    const Mat Ct = solve(jet.dH_t);
    const Mat Cw = solve(jet.dH_w);
    const auto r = jet.H.rows();
    FrameData fd;
    fd.chart = chart;
    fd.h = jet.H;
    fd.A_t = 0.5 * Ct;
    fd.A_w = Cw;
    fd.A_wbar = Mat::Zero(r, r);
    fd.phi = cplx(0.0, -0.5) * Ct;
    return fd;
}

FrameData frame_calculus(const MetricFunction& H, const Point3& p, Chart chart) {
    return frame_calculus(finite_difference_jet(H, p), chart, &p);
}

// ---------------------------------------------------------------------------
// BundleModel

Mat BundleModel::metric(const Point3& p, Chart c) const {
    require_chart(p, c);
    return do_metric(p, c);
}

MetricJet BundleModel::jet(const Point3& p, Chart c) const {
    require_chart(p, c);
    return do_jet(p, c);
}

FrameData BundleModel::frame_data(const Point3& p, Chart c) const {
    require_chart(p, c);
    FrameData fd = do_frame_data(p, c);
    fd.chart = c;
    return fd;
}

Mat BundleModel::transition(const Point3& p, Chart from, Chart to) const {
    require_chart(p, from);
    require_chart(p, to);
    if (from == to) return Mat::Identity(rank(), rank());
    const Mat T = plus_from_minus(p);
    if (from == Chart::Minus) return T;
    return inverse_of(T, p, "transition matrix");
}

Chart BundleModel::chart_for(const Point3& p) const {
    if (charts() == ChartSet::Punctured) return Chart::Punctured;
    return chart_boundary_distance(Chart::Plus, p) >= chart_boundary_distance(Chart::Minus, p) ? Chart::Plus
                                                                                              : Chart::Minus;
}

void BundleModel::require_chart(const Point3& p, Chart c) const {
    if (!has_chart(c)) {
        throw ModelDomainError(label() + " has no chart " + chart_name(c));
    }
    if (!chart_contains(c, p)) {
        throw ModelDomainError("point " + p.str() + " lies outside chart " + chart_name(c));
    }
}

MetricJet BundleModel::do_jet(const Point3& p, Chart c) const {
    return finite_difference_jet([this, c](const Point3& q) { return do_metric(q, c); }, p);
}

FrameData BundleModel::do_frame_data(const Point3& p, Chart c) const {
    if (!mini_frame()) {
        throw ModelDomainError(label() + ": frame calculus needs a mini-holomorphic frame");
    }
    return frame_calculus(do_jet(p, c), c, &p);
}

Mat BundleModel::plus_from_minus(const Point3&) const { return Mat::Identity(rank(), rank()); }

// ---------------------------------------------------------------------------
// Concrete models

namespace {

class DiracModel final : public BundleModel {
  public:
    explicit DiracModel(int m) : m_(m) {}

    int rank() const override { return 1; }
    ChartSet charts() const override { return ChartSet::PlusMinus; }
    std::string label() const override { return "L(" + std::to_string(m_) + ")"; }

  protected:
    Mat do_metric(const Point3& p, Chart c) const override { return scalar(value(p, c)); }

    MetricJet do_jet(const Point3& p, Chart c) const override {
        const AxisSplit s = axis_split(p);
        const double H = value(p, c);
        const double m = m_;
        MetricJet jet;
        jet.H = scalar(H);
        jet.dH_t = scalar(-m * H / s.R);
        // d_w R = wbar / (2R); log H = -m log(R+t) (+const) or m log(R-t).
        const cplx dR_w = std::conj(p.w) / (2.0 * s.R);
        if (c == Chart::Plus) {
            jet.dH_w = scalar(-m * H * dR_w / s.r_plus);
        } else {
            jet.dH_w = scalar(m * H * dR_w / s.r_minus);
        }
        return jet;
    }

    Mat plus_from_minus(const Point3& p) const override { return scalar(ipow(0.5 * p.w, m_)); }

  private:
    double value(const Point3& p, Chart c) const {
        const AxisSplit s = axis_split(p);
        if (c == Chart::Plus) return std::pow(0.5 * s.r_plus, -m_);
        return std::pow(0.5 * s.r_minus, m_);
    }

    int m_;
};

class CounterexampleModel final : public BundleModel {
  public:
    int rank() const override { return 1; }
    ChartSet charts() const override { return ChartSet::Punctured; }
    std::string label() const override { return "counterexample"; }

  protected:
    Mat do_metric(const Point3& p, Chart) const override { return scalar(std::exp(-1.0 / p.radius())); }

    MetricJet do_jet(const Point3& p, Chart) const override {
        const double R = p.radius();
        const double H = std::exp(-1.0 / R);
        const double R3 = R * R * R;
        return MetricJet{scalar(H), scalar(H * p.t / R3), scalar(H * std::conj(p.w) / (2.0 * R3))};
    }
};

class DirectSumModel final : public BundleModel {
  public:
    explicit DirectSumModel(std::vector<ModelPtr> children) : children_(std::move(children)) {
        if (children_.empty()) throw ModelDomainError("direct_sum: empty list");
        for (const auto& ch : children_) {
            if (!ch) throw ModelDomainError("direct_sum: null child");
            if (ch->charts() != children_.front()->charts()) {
                throw ModelDomainError("direct_sum: chart mismatch between " + children_.front()->label() + " and " +
                                       ch->label());
            }
            rank_ += ch->rank();
            mini_ = mini_ && ch->mini_frame();
            closed_ = closed_ && ch->closed_form();
        }
    }

    int rank() const override { return rank_; }
    ChartSet charts() const override { return children_.front()->charts(); }
    bool mini_frame() const override { return mini_; }
    bool closed_form() const override { return closed_; }
    std::string label() const override {
        std::string out;
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (i) out += "+";
            out += children_[i]->label();
        }
        return children_.size() == 1 ? out : "(" + out + ")";
    }

  protected:
    Mat do_metric(const Point3& p, Chart c) const override {
        return fold([&](const ModelPtr& m) { return m->metric(p, c); });
    }

    MetricJet do_jet(const Point3& p, Chart c) const override {
        MetricJet out;
        for (std::size_t i = 0; i < children_.size(); ++i) {
            MetricJet j = children_[i]->jet(p, c);
            if (i == 0) {
                out = std::move(j);
            } else {
                out.H = block_diag(out.H, j.H);
                out.dH_t = block_diag(out.dH_t, j.dH_t);
                out.dH_w = block_diag(out.dH_w, j.dH_w);
            }
        }
        return out;
    }

    FrameData do_frame_data(const Point3& p, Chart c) const override {
        FrameData out;
        for (std::size_t i = 0; i < children_.size(); ++i) {
            FrameData f = children_[i]->frame_data(p, c);
            if (i == 0) {
                out = std::move(f);
            } else {
                out.h = block_diag(out.h, f.h);
                out.A_t = block_diag(out.A_t, f.A_t);
                out.A_w = block_diag(out.A_w, f.A_w);
                out.A_wbar = block_diag(out.A_wbar, f.A_wbar);
                out.phi = block_diag(out.phi, f.phi);
            }
        }
        return out;
    }

    Mat plus_from_minus(const Point3& p) const override {
        return fold([&](const ModelPtr& m) { return m->transition(p, Chart::Minus, Chart::Plus); });
    }

  private:
    template <class F>
    Mat fold(F&& f) const {
        Mat out = f(children_.front());
        for (std::size_t i = 1; i < children_.size(); ++i) out = block_diag(out, f(children_[i]));
        return out;
    }

    std::vector<ModelPtr> children_;
    int rank_ = 0;
    bool mini_ = true;
    bool closed_ = true;
};

class DualModel final : public BundleModel {
  public:
    explicit DualModel(ModelPtr child) : child_(std::move(child)) {
        if (!child_) throw ModelDomainError("dual: null model");
    }

    int rank() const override { return child_->rank(); }
    ChartSet charts() const override { return child_->charts(); }
    bool mini_frame() const override { return child_->mini_frame(); }
    bool closed_form() const override { return child_->closed_form(); }
    std::string label() const override { return "dual(" + child_->label() + ")"; }

  protected:
    Mat do_metric(const Point3& p, Chart c) const override {
        return metric_inverse_transpose(child_->metric(p, c), p);
    }

    MetricJet do_jet(const Point3& p, Chart c) const override {
        const MetricJet j = child_->jet(p, c);
        const Mat Hd = metric_inverse_transpose(j.H, p);
        return MetricJet{Hd, -Hd * j.dH_t.transpose() * Hd, -Hd * j.dH_w.transpose() * Hd};
    }

    FrameData do_frame_data(const Point3& p, Chart c) const override {
        const FrameData f = child_->frame_data(p, c);
        FrameData d;
        d.chart = f.chart;
        d.h = metric_inverse_transpose(f.h, p);
        d.A_t = -f.A_t.transpose();
        d.A_w = -f.A_w.transpose();
        d.A_wbar = -f.A_wbar.transpose();
        d.phi = -f.phi.transpose();
        return d;
    }

    Mat plus_from_minus(const Point3& p) const override {
        return inverse_transpose(child_->transition(p, Chart::Minus, Chart::Plus), p);
    }

  private:
    // Inverting an ill-conditioned metric leaves a Hermiticity defect of
    // order cond(H) * eps; the exact inverse is Hermitian, so symmetrise.
    static Mat metric_inverse_transpose(const Mat& H, const Point3& p) {
        const Mat X = inverse_transpose(H, p);
        return 0.5 * (X + X.adjoint());
    }

    static Mat inverse_transpose(const Mat& M, const Point3& p) {
        return inverse_of(M, p, "dual: matrix").transpose();
    }

    ModelPtr child_;
};

class GaugeModel final : public BundleModel {
  public:
    GaugeModel(ModelPtr child, GaugeGenerator g, bool mini) : child_(std::move(child)), g_(std::move(g)), flag_(mini) {
        if (!child_) throw ModelDomainError("gauge: null model");
        const int r = child_->rank();
        if (g_.constant.size() != 0 && (g_.constant.rows() != r || g_.constant.cols() != r)) {
            throw ModelDomainError("gauge: constant matrix does not match rank " + std::to_string(r));
        }
        if (!g_.diagonal.empty() && static_cast<int>(g_.diagonal.size()) != r) {
            throw ModelDomainError("gauge: diagonal factor count does not match rank " + std::to_string(r));
        }
        if (flag_) verify_mini_holomorphic();
    }

    int rank() const override { return child_->rank(); }
    ChartSet charts() const override { return child_->charts(); }
    bool mini_frame() const override { return flag_ && child_->mini_frame(); }
    bool closed_form() const override { return child_->closed_form(); }
    std::string label() const override { return "gauge(" + child_->label() + ";" + g_.str() + ")"; }

  protected:
    Mat do_metric(const Point3& p, Chart c) const override {
        const auto gv = value(p);
        inverse_of(gv.g, p, "gauge matrix");
        return gv.g.adjoint() * child_->metric(p, c) * gv.g;
    }

    MetricJet do_jet(const Point3& p, Chart c) const override {
        if (!mini_frame()) return BundleModel::do_jet(p, c);
        const auto gv = value(p);
        const MetricJet j = child_->jet(p, c);
        const Mat ga = gv.g.adjoint();
        return MetricJet{ga * j.H * gv.g, ga * j.dH_t * gv.g, ga * j.dH_w * gv.g + ga * j.H * gv.d_w};
    }

    FrameData do_frame_data(const Point3& p, Chart c) const override {
        const FrameData f = child_->frame_data(p, c);
        const auto gv = value(p);
        const Mat gi = inverse_of(gv.g, p, "gauge matrix");
        FrameData out;
        out.h = gv.g.adjoint() * f.h * gv.g;
        out.A_t = gi * f.A_t * gv.g + gi * gv.d_t;
        out.A_w = gi * f.A_w * gv.g + gi * gv.d_w;
        out.A_wbar = gi * f.A_wbar * gv.g + gi * gv.d_wbar;
        out.phi = gi * f.phi * gv.g;
        return out;
    }

    Mat plus_from_minus(const Point3& p) const override {
        const auto gv = value(p);
        return inverse_of(gv.g, p, "gauge matrix") * child_->transition(p, Chart::Minus, Chart::Plus) * gv.g;
    }

  private:
    GaugeGenerator::Value value(const Point3& p) const { return g_.evaluate(p, child_->rank()); }

    void verify_mini_holomorphic() const {
        const Point3 samples[] = {{0.31, {0.42, 0.17}}, {-0.55, {-0.2, 0.6}}, {0.1, {0.9, -0.3}}, {-0.05, {0.0, 0.3}}};
        const double h = 1e-5;
        for (const auto& p : samples) {
            const Mat g0 = value(p).g;
            const Mat dt = (value({p.t + h, p.w}).g - value({p.t - h, p.w}).g) / (2 * h);
            const Mat dx = (value({p.t, p.w + h}).g - value({p.t, p.w - h}).g) / (2 * h);
            const Mat dy = (value({p.t, p.w + cplx(0, h)}).g - value({p.t, p.w - cplx(0, h)}).g) / (2 * h);
            const Mat dwbar = 0.5 * (dx + I * dy);
            const double tol = 1e-6 * std::max(1.0, g0.norm());
            if (dt.norm() > tol || dwbar.norm() > tol) {
                throw ModelDomainError("gauge: generator " + g_.str() + " is flagged mini-holomorphic but d_t g or " +
                                       "d_wbar g is nonzero at " + p.str());
            }
        }
    }

    ModelPtr child_;
    GaugeGenerator g_;
    bool flag_;
};

class MetricTwistModel final : public BundleModel {
  public:
    MetricTwistModel(ModelPtr child, Polynomial f) : child_(std::move(child)), f_(std::move(f)) {
        if (!child_) throw ModelDomainError("metric_twist: null model");
        if (!child_->mini_frame()) {
            throw ModelDomainError("metric_twist: " + child_->label() + " is not given in a mini-holomorphic frame");
        }
    }

    int rank() const override { return child_->rank(); }
    ChartSet charts() const override { return child_->charts(); }
    bool closed_form() const override { return child_->closed_form(); }
    std::string label() const override { return "twist(" + child_->label() + ";" + f_.str() + ")"; }

  protected:
    Mat do_metric(const Point3& p, Chart c) const override { return std::exp(f_.value(p)) * child_->metric(p, c); }

    MetricJet do_jet(const Point3& p, Chart c) const override {
        const MetricJet j = child_->jet(p, c);
        const double ef = std::exp(f_.value(p));
        return MetricJet{ef * j.H, ef * (f_.d_t(p) * j.H + j.dH_t), ef * (f_.d_w(p) * j.H + j.dH_w)};
    }

    Mat plus_from_minus(const Point3& p) const override {
        return child_->transition(p, Chart::Minus, Chart::Plus);
    }

  private:
    ModelPtr child_;
    Polynomial f_;
};

class FunctionModel final : public BundleModel {
  public:
    FunctionModel(int rank, MetricFunction H, std::string label)
        : rank_(rank), H_(std::move(H)), label_(std::move(label)) {
        if (rank_ <= 0) throw ModelDomainError("metric_function_model: rank must be positive");
        if (!H_) throw ModelDomainError("metric_function_model: empty metric function");
    }

    int rank() const override { return rank_; }
    ChartSet charts() const override { return ChartSet::Punctured; }
    bool closed_form() const override { return false; }
    std::string label() const override { return label_; }

  protected:
    Mat do_metric(const Point3& p, Chart) const override {
        Mat H = H_(p);
        if (H.rows() != rank_ || H.cols() != rank_) {
            throw ModelDomainError(label_ + ": metric function returned a matrix of the wrong size");
        }
        return H;
    }

  private:
    int rank_;
    MetricFunction H_;
    std::string label_;
};

}  // namespace

ModelPtr dirac_model(int m) { return std::make_shared<DiracModel>(m); }
ModelPtr counterexample_model() { return std::make_shared<CounterexampleModel>(); }
ModelPtr direct_sum(const std::vector<ModelPtr>& models) { return std::make_shared<DirectSumModel>(models); }
ModelPtr dual(const ModelPtr& model) { return std::make_shared<DualModel>(model); }
ModelPtr gauge(const ModelPtr& model, const GaugeGenerator& g, bool mini_holomorphic) {
    return std::make_shared<GaugeModel>(model, g, mini_holomorphic);
}
ModelPtr metric_twist(const ModelPtr& model, const Polynomial& f) {
    if (f.is_zero()) return model;
    return std::make_shared<MetricTwistModel>(model, f);
}
ModelPtr metric_function_model(int rank, MetricFunction H, std::string label) {
    return std::make_shared<FunctionModel>(rank, std::move(H), std::move(label));
}

// ---------------------------------------------------------------------------
// Polynomial

Monomial Polynomial::parse_monomial(const std::string& text, double coef) {
    Monomial m;
    m.coef = coef;
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    if (s.empty()) throw std::invalid_argument("empty monomial");
    std::stringstream ss(s);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
        if (factor.empty()) throw std::invalid_argument("empty factor in monomial '" + text + "'");
        int power = 1;
        const auto caret = factor.find('^');
        std::string var = factor.substr(0, caret);
        if (caret != std::string::npos) {
            const std::string ps = factor.substr(caret + 1);
            if (ps.empty() || !std::all_of(ps.begin(), ps.end(), [](char c) { return std::isdigit(c); })) {
                throw std::invalid_argument("bad exponent '" + ps + "' in monomial '" + text + "'");
            }
            power = std::stoi(ps);
        }
        if (var == "t") {
            m.pt += power;
        } else if (var == "x") {
            m.px += power;
        } else if (var == "y") {
            m.py += power;
        } else if (var == "1" && caret == std::string::npos) {
            // constant factor
        } else {
            throw std::invalid_argument("unknown variable '" + var + "' in monomial '" + text + "'");
        }
    }
    return m;
}

double Polynomial::eval(const Point3& p, int dt, int dx, int dy) const {
    auto term = [](double v, int n, int d) {
        if (d > n) return 0.0;
        double c = 1.0;
        for (int k = 0; k < d; ++k) c *= n - k;
        return c * std::pow(v, n - d);
    };
    double out = 0.0;
    for (const auto& m : terms_) {
        out += m.coef * term(p.t, m.pt, dt) * term(p.x(), m.px, dx) * term(p.y(), m.py, dy);
    }
    return out;
}

double Polynomial::value(const Point3& p) const { return eval(p, 0, 0, 0); }
double Polynomial::d_t(const Point3& p) const { return eval(p, 1, 0, 0); }
double Polynomial::d_x(const Point3& p) const { return eval(p, 0, 1, 0); }
double Polynomial::d_y(const Point3& p) const { return eval(p, 0, 0, 1); }

bool Polynomial::is_harmonic() const {
    std::map<std::array<int, 3>, double> lap;
    double scale = 0.0;
    for (const auto& m : terms_) {
        scale = std::max(scale, std::abs(m.coef));
        if (m.pt >= 2) lap[{m.pt - 2, m.px, m.py}] += m.coef * m.pt * (m.pt - 1);
        if (m.px >= 2) lap[{m.pt, m.px - 2, m.py}] += m.coef * m.px * (m.px - 1);
        if (m.py >= 2) lap[{m.pt, m.px, m.py - 2}] += m.coef * m.py * (m.py - 1);
    }
    return std::all_of(lap.begin(), lap.end(), [&](const auto& kv) { return std::abs(kv.second) <= 1e-12 * scale; });
}

bool Polynomial::is_zero() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Monomial& m) { return m.coef == 0.0; });
}

std::string Polynomial::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (const auto& m : terms_) {
        if (m.coef == 0.0) continue;
        if (!out.empty()) out += "+";
        std::string mono;
        auto add = [&](const char* v, int n) {
            if (n == 0) return;
            if (!mono.empty()) mono += "*";
            mono += v;
            if (n > 1) mono += "^" + std::to_string(n);
        };
        add("t", m.pt);
        add("x", m.px);
        add("y", m.py);
        if (mono.empty()) {
            out += fmt_num(m.coef);
        } else if (m.coef == 1.0) {
            out += mono;
        } else {
            out += fmt_num(m.coef) + "*" + mono;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// GaugeGenerator

GaugeGenerator::Value GaugeGenerator::evaluate(const Point3& p, int rank) const {
    const Mat C = constant.size() ? constant : Mat::Identity(rank, rank);
    Value v;
    if (diagonal.empty()) {
        v.g = C;
        v.d_t = v.d_w = v.d_wbar = Mat::Zero(rank, rank);
        return v;
    }
    Mat D = Mat::Zero(rank, rank), Dt = D, Dw = D, Dwb = D;
    for (int i = 0; i < rank; ++i) {
        const auto& f = diagonal[static_cast<std::size_t>(i)];
        const cplx e = std::exp(f.t_rate * p.t + f.w_rate * p.w + f.wbar_rate * std::conj(p.w));
        const cplx wp = ipow(p.w, f.w_power);
        const cplx d = wp * e;
        D(i, i) = d;
        Dt(i, i) = f.t_rate * d;
        const cplx dwp = f.w_power == 0 ? cplx{0.0, 0.0} : double(f.w_power) * ipow(p.w, f.w_power - 1);
        Dw(i, i) = dwp * e + f.w_rate * d;
        Dwb(i, i) = f.wbar_rate * d;
    }
    v.g = C * D;
    v.d_t = C * Dt;
    v.d_w = C * Dw;
    v.d_wbar = C * Dwb;
    return v;
}

bool GaugeGenerator::analytically_mini_holomorphic() const {
    return std::all_of(diagonal.begin(), diagonal.end(),
                       [](const DiagonalFactor& f) { return f.t_rate == 0.0 && f.wbar_rate == cplx{0.0, 0.0}; });
}

std::string GaugeGenerator::str() const {
    std::string out;
    if (constant.size()) out += "C" + std::to_string(constant.rows());
    if (!diagonal.empty()) {
        if (!out.empty()) out += "*";
        out += "diag[";
        for (std::size_t i = 0; i < diagonal.size(); ++i) {
            const auto& f = diagonal[i];
            if (i) out += ",";
            std::string d;
            if (f.w_power) d += "w^" + std::to_string(f.w_power);
            if (f.t_rate != 0.0 || f.w_rate != cplx{} || f.wbar_rate != cplx{}) {
                if (!d.empty()) d += "*";
                d += "exp(" + fmt_num(f.t_rate) + "t";
                if (f.w_rate != cplx{}) d += "+(" + fmt_num(f.w_rate.real()) + "," + fmt_num(f.w_rate.imag()) + ")w";
                if (f.wbar_rate != cplx{})
                    d += "+(" + fmt_num(f.wbar_rate.real()) + "," + fmt_num(f.wbar_rate.imag()) + ")wbar";
                d += ")";
            }
            out += d.empty() ? "1" : d;
        }
        out += "]";
    }
    return out.empty() ? "id" : out;
}

// ---------------------------------------------------------------------------
// ModelSpec

int ModelSpec::depth() const {
    int d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
}

bool ModelSpec::monopole_by_construction() const {
    // e^f H solves the same equation as H exactly when f is harmonic.
    if (kind == Kind::MetricTwist && !twist.is_harmonic()) return false;
    return std::all_of(children.begin(), children.end(),
                       [](const ModelSpec& c) { return c.monopole_by_construction(); });
}

std::string ModelSpec::label() const { return build_model(*this)->label(); }

ModelPtr build_model(const ModelSpec& spec) {
    if (spec.depth() > kMaxSpecDepth) {
        throw ModelDomainError("model tree deeper than " + std::to_string(kMaxSpecDepth));
    }
    auto only_child = [&](const char* what) {
        if (spec.children.size() != 1) {
            throw ModelDomainError(std::string(what) + " needs exactly one child model");
        }
        return build_model(spec.children.front());
    };
    switch (spec.kind) {
        case ModelSpec::Kind::DiracSum: {
            if (spec.charges.empty()) throw ModelDomainError("dirac_sum needs at least one charge");
            if (spec.charges.size() == 1) return dirac_model(spec.charges.front());
            std::vector<ModelPtr> parts;
            for (int k : spec.charges) parts.push_back(dirac_model(k));
            return direct_sum(parts);
        }
        case ModelSpec::Kind::Counterexample: return counterexample_model();
        case ModelSpec::Kind::DirectSum: {
            std::vector<ModelPtr> parts;
            for (const auto& c : spec.children) parts.push_back(build_model(c));
            return direct_sum(parts);
        }
        case ModelSpec::Kind::Dual: return dual(only_child("dual"));
        case ModelSpec::Kind::Gauge: return gauge(only_child("gauge"), spec.generator, spec.mini_holomorphic);
        case ModelSpec::Kind::MetricTwist: return metric_twist(only_child("metric_twist"), spec.twist);
    }
    throw ModelDomainError("unknown model kind");
}

}  // namespace monolab
