#include "monolab/diffcheck.hpp"
#include "monolab/errors.hpp"
#include "monolab/pullback.hpp"
#include "monolab/sampling.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace monolab;
using Catch::Approx;

namespace {

const Point4 kQ = hopf_lift(Point3{0.6, {0.8, 0.0}}, 0.0);

Polynomial poly(const std::string& monomial) { return Polynomial({Polynomial::parse_monomial(monomial, 1.0)}); }

}  // namespace

TEST_CASE("pulled-back data in a mini-holomorphic frame has no antiholomorphic part") {
    for (const ModelPtr& m : {dirac_model(2), counterexample_model()}) {
        const InstantonData d = pullback_connection(*m, kQ);
        CHECK(d.B_u1bar.norm() < 1e-13);
        CHECK(d.B_u2bar.norm() < 1e-13);
    }
    const InstantonData flat = pullback_connection(*dirac_model(0), kQ);
    CHECK(flat.B_u1.norm() + flat.B_u2.norm() + flat.B_u1bar.norm() + flat.B_u2bar.norm() == 0.0);
}

TEST_CASE("pulled-back counterexample metric") {
    const Point4 q{{0.3, 0.2}, {-0.4, 0.5}};
    const InstantonData d = pullback_connection(*counterexample_model(), q);
    CHECK(d.h_tilde(0, 0).real() == Approx(std::exp(-1.0 / q.rho2())).epsilon(1e-13));
}

TEST_CASE("monopoles pull back to instantons") {
    const std::vector<double> steps{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    for (const ModelPtr& m : {dirac_model(1), counterexample_model()}) {
        std::vector<InstantonResidual> ladder;
        for (double h : steps) ladder.push_back(instanton_residual(*m, kQ, h));
        CHECK(ladder.back().max() < 1e-6);
        std::size_t k = 0;
        const double ord =
            convergence_order([&](double) { return ladder[k++].contraction; }, steps, kRoundoffNoise).order;
        CHECK((std::isinf(ord) || (ord > 1.7 && ord < 2.3)));
    }
    UniformSource src(5);
    for (int k = 0; k < 5; ++k) {
        const double R = src.uniform(0.5, 1.0);
        const Point3 p{R * src.uniform(-0.9, 0.9), 0.0};
        const Point3 on{p.t, std::polar(std::sqrt(R * R - p.t * p.t), src.uniform(0.0, 6.0))};
        CHECK(instanton_residual(*counterexample_model(), hopf_lift(on, src.uniform(0.0, 6.0)), 1e-4).max() < 1e-6);
    }
}

TEST_CASE("a non-harmonic twist keeps the holomorphic structure but not the contraction") {
    const InstantonResidual r = instanton_residual(*metric_twist(dirac_model(1), poly("x^2")), kQ, 1e-4);
    CHECK(r.contraction > 1e-2);
    CHECK(r.f02 < 1e-6);
    CHECK(pullback_unitarity_residual(*metric_twist(dirac_model(1), poly("x^2")), kQ, 1e-4) < 1e-6);
}

TEST_CASE("circle equivariance") {
    CHECK(equivariance_residual(*dirac_model(2), kQ, 0.0) == 0.0);
    CHECK(equivariance_residual(*dirac_model(2), kQ, std::numbers::pi / 3) < 1e-12);
    CHECK(equivariance_residual(*counterexample_model(), kQ, std::numbers::pi) < 1e-12);
}

TEST_CASE("extension probe") {
    const auto radii = geometric_radii(0.5, 0.005, 8);
    for (int m : {-1, 2}) {
        const ExtensionProbe e = extension_probe(*dirac_model(m), {m}, radii, 16);
        CHECK(std::abs(e.fit.exponent) < 1e-8);
    }
    const ExtensionProbe ce = extension_probe(*counterexample_model(), {0}, radii, 16);
    CHECK(ce.inverse_fit.slope > 0.9);
    CHECK(ce.inverse_fit.r2 > 0.99);
    const ExtensionProbe tw = extension_probe(*metric_twist(dirac_model(1), poly("t")), {1}, radii, 16);
    CHECK(std::abs(tw.fit.exponent) < 0.05);
}
