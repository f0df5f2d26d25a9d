#include "monolab/errors.hpp"
#include "monolab/models.hpp"
#include "monolab/sampling.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace monolab;
using Catch::Approx;

namespace {

Mat scalar(cplx v) { return Mat::Constant(1, 1, v); }

double diff(const Mat& a, const Mat& b) { return (a - b).norm(); }

Mat unitary_mix() {
    const double c = std::cos(0.6), s = std::sin(0.6);
    const cplx ph = std::polar(1.0, 0.9);
    Mat U(2, 2);
    U << c, -s * std::conj(ph), s * ph, c;
    return U;
}

Polynomial poly(const std::string& monomial, double coef = 1.0) {
    return Polynomial({Polynomial::parse_monomial(monomial, coef)});
}

}  // namespace

TEST_CASE("frame calculus of exp(-1/R) matches the closed form") {
    const MetricFunction H = [](const Point3& p) { return scalar(std::exp(-1.0 / p.radius())); };
    for (const Point3& p : random_points(10, 0.3, 1.0, 5)) {
        const double R = p.radius(), R3 = R * R * R;
        const FrameData fd = frame_calculus(H, p);
        CHECK(std::abs(fd.phi(0, 0) - cplx(0.0, -p.t / (2 * R3))) < 1e-7);
        CHECK(std::abs(fd.A_t(0, 0) - p.t / (2 * R3)) < 1e-7);
        CHECK(std::abs(fd.A_w(0, 0) - std::conj(p.w) / (2 * R3)) < 1e-7);
        CHECK(std::abs(fd.A_wbar(0, 0)) == 0.0);
    }
}

TEST_CASE("frame calculus of the flat metric") {
    const FrameData fd = frame_calculus([](const Point3&) { return scalar(1.0); }, Point3{0.2, {0.3, 0.1}});
    CHECK(fd.phi.norm() < 1e-12);
    CHECK(fd.A_t.norm() < 1e-12);
    CHECK(fd.A_w.norm() < 1e-12);
}

TEST_CASE("frame calculus of ((R+t)/2)^{-m} gives phi = i m / (2R)") {
    for (int m : {-2, 1, 3}) {
        const MetricFunction H = [m](const Point3& p) { return scalar(std::pow((p.radius() + p.t) / 2.0, -m)); };
        const FrameData fd = frame_calculus(H, Point3{0.6, {0.8, 0.0}}, Chart::Plus);
        CHECK(std::abs(fd.phi(0, 0) - cplx(0.0, m / 2.0)) < 1e-7);
    }
}

TEST_CASE("Dirac models") {
    CHECK(dirac_model(0)->frame_data(Point3{0.4, {0.1, 0.2}}).phi.norm() == 0.0);
    const ModelPtr L1 = dirac_model(1);
    const Point3 p{3.0, {0.0, 4.0}};
    CHECK(std::abs(L1->frame_data(p).phi(0, 0) - cplx(0.0, 0.1)) < 1e-14);
    // H- = |w/2|^{2m} H+ on the overlap; both equal 1 at (0, 2) for m = 1.
    const Point3 q{0.0, {2.0, 0.0}};
    CHECK(std::abs(L1->metric(q, Chart::Plus)(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(L1->metric(q, Chart::Minus)(0, 0) - 1.0) < 1e-14);
    for (const Point3& r : random_points(10, 0.2, 1.0, 3)) {
        if (std::abs(r.w) < 1e-3) continue;
        const double ratio = L1->metric(r, Chart::Minus)(0, 0).real() / L1->metric(r, Chart::Plus)(0, 0).real();
        CHECK(ratio == Approx(std::norm(r.w / 2.0)).epsilon(1e-12));
        // The transition respects the metric: T^* H+ T = H-.
        const Mat T = L1->transition(r, Chart::Minus, Chart::Plus);
        CHECK(diff(T.adjoint() * L1->metric(r, Chart::Plus) * T, L1->metric(r, Chart::Minus)) < 1e-12);
    }
    CHECK_THROWS_AS(L1->metric(Point3{-0.5, {0.0, 0.0}}, Chart::Plus), ModelDomainError);
}

TEST_CASE("counterexample") {
    const ModelPtr ce = counterexample_model();
    const Point3 unit{0.6, {0.8, 0.0}};
    CHECK(std::sqrt(ce->metric(unit, Chart::Punctured)(0, 0).real()) == Approx(std::exp(-0.5)).epsilon(1e-14));
    const ModelPtr d = dual(ce);
    CHECK(std::sqrt(d->metric(unit, Chart::Punctured)(0, 0).real()) == Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK(std::abs(ce->frame_data(Point3{1.0, {0.0, 0.0}}).phi(0, 0) - cplx(0.0, -0.5)) < 1e-14);
    CHECK_THROWS_AS(ce->metric(Point3{0.0, {0.0, 0.0}}, Chart::Punctured), ModelDomainError);
}

TEST_CASE("direct sums") {
    const Point3 p{0.6, {0.0, 0.8}};
    CHECK(diff(direct_sum({dirac_model(0)})->frame_data(p).phi, dirac_model(0)->frame_data(p).phi) == 0.0);
    const ModelPtr s = direct_sum({dirac_model(2), dirac_model(-1)});
    const Eigen::VectorXcd ev = s->frame_data(p).phi.eigenvalues();
    std::vector<double> im{ev(0).imag(), ev(1).imag()};
    std::sort(im.begin(), im.end());
    CHECK(im[0] == Approx(-0.5).margin(1e-14));
    CHECK(im[1] == Approx(1.0).margin(1e-14));
    CHECK(direct_sum({dirac_model(1), dirac_model(1), dirac_model(0)})->rank() == 3);
    CHECK_THROWS(direct_sum({dirac_model(1), counterexample_model()}));
}

TEST_CASE("duals") {
    for (const ModelPtr& m : {dirac_model(3), counterexample_model(), direct_sum({dirac_model(2), dirac_model(-1)})}) {
        const ModelPtr dd = dual(dual(m));
        for (const Point3& p : random_points(8, 0.2, 1.0, 11)) {
            const Chart c = m->chart_for(p);
            CHECK(diff(dd->metric(p, c), m->metric(p, c)) < 1e-12 * std::max(1.0, m->metric(p, c).norm()));
            CHECK(diff(dd->frame_data(p, c).phi, m->frame_data(p, c).phi) < 1e-12);
        }
    }
    const Point3 p{0.3, {0.2, -0.4}};
    CHECK(std::abs(dual(dirac_model(2))->frame_data(p).phi(0, 0) - cplx(0.0, -2.0 / (2 * p.radius()))) < 1e-13);
    const double R = p.radius();
    CHECK(dual(counterexample_model())->metric(p, Chart::Punctured)(0, 0).real() ==
          Approx(std::exp(1.0 / R)).epsilon(1e-13));
}

TEST_CASE("gauge transformations") {
    const ModelPtr base = direct_sum({dirac_model(2), dirac_model(-1)});
    const Point3 p{0.5, {0.3, 0.4}};
    const ModelPtr same = gauge(base, GaugeGenerator{}, true);
    CHECK(diff(same->metric(p, Chart::Plus), base->metric(p, Chart::Plus)) < 1e-14);

    GaugeGenerator u;
    u.constant = unitary_mix();
    const ModelPtr mixed = gauge(base, u, true);
    const Eigen::VectorXcd a = base->frame_data(p).phi.eigenvalues(), b = mixed->frame_data(p).phi.eigenvalues();
    std::vector<double> ia{a(0).imag(), a(1).imag()}, ib{b(0).imag(), b(1).imag()};
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    CHECK(ia[0] == Approx(ib[0]).margin(1e-12));
    CHECK(ia[1] == Approx(ib[1]).margin(1e-12));

    GaugeGenerator not_mini;
    not_mini.diagonal = {DiagonalFactor{0, 1.0, {0.0, 0.0}, {0.0, 0.0}}, DiagonalFactor{}};
    CHECK_FALSE(not_mini.analytically_mini_holomorphic());
    CHECK_THROWS(gauge(base, not_mini, true));
    CHECK_FALSE(gauge(base, not_mini, false)->mini_frame());

    GaugeGenerator singular;
    singular.constant = Mat::Zero(2, 2);
    CHECK_THROWS(gauge(base, singular, false)->metric(p, Chart::Plus));
}

TEST_CASE("metric twists") {
    const Point3 p{0.4, {0.6, -0.2}};
    const ModelPtr L1 = dirac_model(1);
    CHECK(diff(metric_twist(L1, Polynomial{})->frame_data(p).phi, L1->frame_data(p).phi) < 1e-14);

    const Mat shift = metric_twist(L1, poly("t"))->frame_data(p).phi - L1->frame_data(p).phi;
    CHECK(std::abs(shift(0, 0) - cplx(0.0, -0.5)) < 1e-12);

    // f = x^2 + y^2 on L(0): phi stays 0 and A_w = d_w f = wbar.
    const ModelPtr tw = metric_twist(dirac_model(0), Polynomial({Polynomial::parse_monomial("x^2", 1.0),
                                                                 Polynomial::parse_monomial("y^2", 1.0)}));
    const FrameData fd = tw->frame_data(Point3{0.0, {1.0, 1.0}});
    CHECK(fd.phi.norm() < 1e-14);
    CHECK(std::abs(fd.A_w(0, 0) - cplx(1.0, -1.0)) < 1e-12);
}

TEST_CASE("polynomials") {
    const Monomial m = Polynomial::parse_monomial("t*x*y^3", 2.0);
    CHECK(m.pt == 1);
    CHECK(m.px == 1);
    CHECK(m.py == 3);
    CHECK_THROWS_AS(Polynomial::parse_monomial("z", 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Polynomial::parse_monomial("x^", 1.0), std::invalid_argument);
    CHECK(poly("x").is_harmonic());
    CHECK(poly("t*x").is_harmonic());
    CHECK_FALSE(poly("x^2").is_harmonic());
    CHECK(Polynomial({Polynomial::parse_monomial("x^2", 1.0), Polynomial::parse_monomial("t^2", -1.0)}).is_harmonic());
    const Polynomial f({Polynomial::parse_monomial("t*x^2", 3.0)});
    const Point3 p{2.0, {1.0, 5.0}};
    CHECK(f.value(p) == Approx(6.0));
    CHECK(f.d_t(p) == Approx(3.0));
    CHECK(f.d_x(p) == Approx(12.0));
    CHECK(f.d_y(p) == 0.0);
}

TEST_CASE("model specs") {
    ModelSpec leaf;
    leaf.kind = ModelSpec::Kind::DiracSum;
    leaf.charges = {1};
    ModelSpec tw;
    tw.kind = ModelSpec::Kind::MetricTwist;
    tw.children = {leaf};
    tw.twist = poly("x^2");
    CHECK(leaf.monopole_by_construction());
    CHECK_FALSE(tw.monopole_by_construction());
    tw.twist = poly("t");
    CHECK(tw.monopole_by_construction());
    CHECK(tw.depth() == 2);
    CHECK(build_model(tw)->rank() == 1);
}
