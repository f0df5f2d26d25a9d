#include "monolab/analysis.hpp"
#include "monolab/sampling.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace monolab;
using Catch::Approx;

namespace {

const std::vector<double> kRadii = geometric_radii(0.5, 0.005, 12);

Polynomial poly(const std::string& monomial) { return Polynomial({Polynomial::parse_monomial(monomial, 1.0)}); }

ModelPtr mixed(const ModelPtr& base) {
    const double c = std::cos(0.6), s = std::sin(0.6);
    const cplx ph = std::polar(1.0, 0.9);
    GaugeGenerator g;
    g.constant = Mat(2, 2);
    g.constant << c, -s * std::conj(ph), s * ph, c;
    return gauge(base, g, true);
}

}  // namespace

TEST_CASE("scattering of flat and Dirac models") {
    const ScatteringMatrix flat = scatter(*dirac_model(0), {0.3, -0.2}, -0.7, 0.4, 1e-10);
    CHECK((flat.matrix - Mat::Identity(1, 1)).norm() < 1e-12);
    for (int m : {-2, -1, 1, 2, 3}) {
        const cplx w{0.5, 0.0};
        const ScatteringMatrix S = scatter(*dirac_model(m), w, -0.5, 0.5, 1e-10);
        CHECK(S.chart_from == Chart::Minus);
        CHECK(S.chart_to == Chart::Plus);
        CHECK(std::abs(S.matrix(0, 0) - std::pow(w / 2.0, m)) < 1e-9 * std::abs(std::pow(w / 2.0, m)));
    }
    const ScatteringMatrix L3 = scatter(*dirac_model(3), 0.5, -0.5, 0.5, 1e-10);
    CHECK(std::abs(L3.matrix(0, 0) - 0.015625) / 0.015625 < 1e-6);
}

TEST_CASE("scattering of a direct sum is block diagonal") {
    const cplx w = std::polar(0.4, 1.1);
    const Mat S = scatter(*direct_sum({dirac_model(2), dirac_model(-1)}), w, -0.5, 0.5, 1e-10).matrix;
    CHECK(std::abs(S(0, 1)) < 1e-12);
    CHECK(std::abs(S(1, 0)) < 1e-12);
    CHECK(std::abs(S(0, 0) - std::pow(w / 2.0, 2)) < 1e-9);
    CHECK(std::abs(S(1, 1) - std::pow(w / 2.0, -1)) < 1e-8);
}

TEST_CASE("scattering composes and dualises") {
    const ModelPtr m = counterexample_model();
    const cplx w{0.3, 0.4};
    const Mat S13 = scatter(*m, w, -0.8, 0.9, 1e-10).matrix;
    const Mat S = scatter(*m, w, 0.1, 0.9, 1e-10).matrix * scatter(*m, w, -0.8, 0.1, 1e-10).matrix;
    CHECK((S13 - S).norm() / S13.norm() < 1e-8);
    const Mat D = scatter(*dual(m), w, -0.8, 0.9, 1e-10).matrix;
    CHECK((D - S13.inverse().transpose()).norm() < 1e-9);
    CHECK_THROWS_AS(scatter(*m, 0.0, -0.5, 0.5, 1e-10), ModelDomainError);
}

TEST_CASE("pole orders") {
    for (int m = -2; m <= 3; ++m) {
        const ChargeVector cv = scattering_pole_orders(*dirac_model(m), 0.5, kRadii, 8);
        REQUIRE(cv.charges.size() == 1);
        CHECK(cv.charges[0] == m);
        CHECK(cv.spread < 1e-6);
    }
    const ModelPtr s = direct_sum({dirac_model(2), dirac_model(-1)});
    CHECK(scattering_pole_orders(*s, 0.5, kRadii, 8).charges == std::vector<int>{-1, 2});
    CHECK(scattering_pole_orders(*mixed(s), 0.5, kRadii, 8).charges == std::vector<int>{-1, 2});
    CHECK_THROWS(scattering_pole_orders(*s, 0.5, {0.5, 0.4, 0.3, 0.2}, 8));
}

TEST_CASE("mini-holomorphic sections along the axis and off it") {
    // L(m), section given at t = -eps on w = 0: |s|_h = |t|^{m/2}.
    for (int m : {-1, 2}) {
        const auto path = mini_section_flow(*dirac_model(m), 0.0, -0.5, -0.01, Vec::Ones(1), 6);
        for (const FlowPoint& fp : path) {
            CHECK(fp.norm == Approx(std::pow(std::abs(fp.point.t), m / 2.0)).epsilon(1e-8));
        }
    }
    // Counterexample at w != 0: |e|_h = exp(-1/(2R)); its dual: exp(+1/(2R)).
    const cplx w{0.01, 0.0};
    const auto e = mini_section_flow(*counterexample_model(), w, -0.5, 0.0, Vec::Ones(1), 5);
    const auto ed = mini_section_flow(*dual(counterexample_model()), w, -0.5, 0.0, Vec::Ones(1), 5);
    for (std::size_t k = 0; k < e.size(); ++k) {
        const double R = e[k].point.radius();
        CHECK(e[k].log_norm == Approx(-0.5 / R).epsilon(1e-8));
        CHECK(ed[k].log_norm == Approx(0.5 / R).epsilon(1e-8));
    }
}

TEST_CASE("growth classification") {
    GrowthFit poly_fit;
    poly_fit.exponent = -1.0;
    poly_fit.fit_quality = 1.0;
    LinearFit flat_inverse{0.0, 0.0, 0.2};
    CHECK(classify_growth(poly_fit, flat_inverse) == GrowthClass::polynomial);
    GrowthFit vanishing;
    vanishing.exponent = std::numeric_limits<double>::infinity();
    vanishing.fit_quality = 1.0;
    CHECK(classify_growth(vanishing, flat_inverse) == GrowthClass::superpolynomial_decay);
    GrowthFit blowup;
    blowup.exponent = -40.0;
    blowup.fit_quality = 0.8;
    CHECK(classify_growth(blowup, LinearFit{0.5, 0.0, 1.0}) == GrowthClass::superpolynomial_growth);
    GrowthFit decay;
    decay.exponent = 40.0;
    decay.fit_quality = 0.8;
    CHECK(classify_growth(decay, LinearFit{-0.5, 0.0, 1.0}) == GrowthClass::superpolynomial_decay);
}

TEST_CASE("condition (D)") {
    const auto rays = default_rays();
    CHECK(rays.size() == 10);
    for (int m : {0, 1, -2}) {
        const ConditionDReport d = condition_D_check(*dirac_model(m), 0.5, rays, kRadii);
        CHECK(d.passes);
        for (const SectionGrowth& s : d.sections) {
            // |sigma_-| ~ R^{m/2} approaching from t < 0; |sigma_+| ~ R^{-m/2} from t > 0.
            CHECK(s.fit.exponent == Approx(-s.side * m / 2.0).margin(0.02));
        }
    }
    const ConditionDReport ce = condition_D_check(*counterexample_model(), 0.5, rays, kRadii);
    CHECK_FALSE(ce.passes);
    for (const SectionGrowth& s : ce.sections) CHECK(s.bounded_polynomially());
    for (const SectionGrowth& s : ce.dual_sections) {
        CHECK(s.growth == GrowthClass::superpolynomial_growth);
        CHECK(s.inverse_fit.slope == Approx(0.5).margin(0.01));
    }
}

TEST_CASE("condition (D) exponents do not depend on the choice of unitary frame") {
    const ModelPtr s = direct_sum({dirac_model(2), dirac_model(-1)});
    const ConditionDReport a = condition_D_check(*s, 0.5, default_rays(), kRadii);
    const ConditionDReport b = condition_D_check(*mixed(s), 0.5, default_rays(), kRadii);
    CHECK(b.passes);
    CHECK(a.E_exponent.exponent == Approx(b.E_exponent.exponent).margin(1e-8));
    CHECK(a.dual_exponent.exponent == Approx(b.dual_exponent.exponent).margin(1e-8));
}

TEST_CASE("sup of |phi| on spheres") {
    for (double R : {0.5, 0.05}) {
        CHECK(sup_on_sphere(*dirac_model(3), R, 32) == Approx(3.0 / (2 * R)).epsilon(1e-12));
        CHECK(sup_on_sphere(*counterexample_model(), R, 32) == Approx(1.0 / (2 * R * R)).epsilon(1e-12));
        CHECK(sup_on_sphere(*dirac_model(0), R, 32) == 0.0);
    }
}

TEST_CASE("classification by growth of the Higgs field") {
    for (int m : {1, 3, -2}) {
        const Classification c = classify_dirac(*dirac_model(m), kRadii, 32);
        CHECK(c.verdict == Verdict::dirac);
        CHECK(c.phi_fit.exponent == Approx(-1.0).margin(1e-6));
        REQUIRE(c.charges.has_value());
        CHECK(c.charges->charges == std::vector<int>{m});
        REQUIRE(c.condition_d.has_value());
        CHECK(c.condition_d->passes);
    }
    const Classification ce = classify_dirac(*counterexample_model(), kRadii, 32);
    CHECK(ce.verdict == Verdict::not_dirac);
    CHECK(ce.phi_fit.exponent == Approx(-2.0).margin(1e-6));
    CHECK_FALSE(ce.condition_d.has_value());

    const Classification tw =
        classify_dirac(*metric_twist(dirac_model(1), poly("t")), geometric_radii(0.05, 0.0005, 12), 32);
    CHECK(tw.verdict == Verdict::dirac);
    CHECK(tw.phi_fit.exponent == Approx(-1.0).margin(0.05));
}

TEST_CASE("charge extraction") {
    for (int m : {-2, 0, 3}) CHECK(extract_charges(*dirac_model(m), kRadii, 16).charges == std::vector<int>{m});
    const ModelPtr s = mixed(direct_sum({dirac_model(2), dirac_model(-1)}));
    const ChargeVector cv = extract_charges(*s, kRadii, 16);
    CHECK(cv.charges == std::vector<int>{-1, 2});
    CHECK(cv.spread < 1e-8);
    CHECK(extract_charges(*metric_twist(dirac_model(1), poly("t")), kRadii, 16).charges == std::vector<int>{1});
}

TEST_CASE("asymptotic comparison with the Dirac sum") {
    const AsymptoticsReport self = asymptotics_check(*dirac_model(2), {2}, kRadii, 16);
    CHECK(std::isinf(self.p1_exponent));
    CHECK(self.p2_sup == 0.0);
    CHECK(self.grad_rphi_sup < 1e-6);

    const AsymptoticsReport tw = asymptotics_check(*metric_twist(dirac_model(1), poly("t")), {1}, kRadii, 16);
    CHECK(tw.p1_exponent == Approx(1.0).margin(0.1));
    CHECK(tw.p2_sup == Approx(0.5).margin(1e-6));

    // Constant unitary mixing is undone by the alignment.
    const ModelPtr mix = mixed(direct_sum({dirac_model(1), dirac_model(0)}));
    const AsymptoticsReport m = asymptotics_check(*mix, {0, 1}, kRadii, 16);
    CHECK(m.p2_sup < 1e-8);
    CHECK(m.p1_exponent > 0.9);
}
