#include "monolab/geometry.hpp"
#include "monolab/errors.hpp"
#include "monolab/sampling.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace monolab;
using Catch::Approx;

namespace {
bool close(cplx a, cplx b, double tol = 1e-14) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("radius of points in R x C") {
    CHECK(radius(Point3{0.0, {0.0, 0.0}}) == 0.0);
    CHECK(radius(Point3{3.0, {0.0, 4.0}}) == Approx(5.0).margin(1e-15));
    CHECK(radius(Point3{1.0, {1.0, 1.0}}) == Approx(std::sqrt(3.0)).margin(1e-15));
}

TEST_CASE("Hopf projection on axis and diagonal points") {
    Point3 p = hopf_project(Point4{{1.0, 0.0}, {0.0, 0.0}});
    CHECK(p.t == 1.0);
    CHECK(close(p.w, 0.0));
    p = hopf_project(Point4{{0.0, 0.0}, {1.0, 0.0}});
    CHECK(p.t == -1.0);
    CHECK(close(p.w, 0.0));
    p = hopf_project(Point4{{1.0, 0.0}, {1.0, 0.0}});
    CHECK(p.t == 0.0);
    CHECK(close(p.w, 2.0));
}

TEST_CASE("Hopf projection maps the 4-sphere of radius rho to the sphere of radius rho^2") {
    const Point4 q{{0.3, -0.4}, {0.5, 0.2}};
    CHECK(hopf_project(q).radius() == Approx(q.rho2()).epsilon(1e-14));
}

TEST_CASE("Hopf lift inverts the projection") {
    Point4 q = hopf_lift(Point3{1.0, {0.0, 0.0}}, 0.0);
    CHECK(close(q.u1, 1.0));
    CHECK(close(q.u2, 0.0));
    q = hopf_lift(Point3{-1.0, {0.0, 0.0}}, 0.0);
    CHECK(close(q.u1, 0.0));
    CHECK(close(q.u2, 1.0));
    q = hopf_lift(Point3{0.0, {2.0, 0.0}}, 0.0);
    CHECK(close(q.u1, 1.0));
    CHECK(close(q.u2, 1.0));

    for (const Point3& p : random_points(50, 0.1, 2.0, 7)) {
        for (double th : {0.0, 1.0, 4.0}) {
            const Point3 back = hopf_project(hopf_lift(p, th));
            CHECK(std::abs(back.t - p.t) < 1e-13);
            CHECK(close(back.w, p.w, 1e-13));
        }
    }
    CHECK_THROWS_AS(hopf_lift(Point3{0.0, {0.0, 0.0}}, 0.0), ModelDomainError);
}

TEST_CASE("circle action fixes Hopf fibres") {
    const Point4 q{{1.0, 0.0}, {1.0, 0.0}};
    Point4 r = s1_act(0.0, q);
    CHECK(close(r.u1, q.u1));
    CHECK(close(r.u2, q.u2));
    r = s1_act(std::numbers::pi, q);
    CHECK(close(r.u1, -1.0));
    CHECK(close(r.u2, -1.0));
    UniformSource src(3);
    for (int k = 0; k < 20; ++k) {
        const Point4 a{{src.uniform(-1, 1), src.uniform(-1, 1)}, {src.uniform(-1, 1), src.uniform(-1, 1)}};
        const double th = src.uniform(0.0, 7.0);
        const Point3 p = hopf_project(a), p2 = hopf_project(s1_act(th, a));
        CHECK(std::abs(p.t - p2.t) < 1e-14);
        CHECK(close(p.w, p2.w, 1e-14));
    }
}

TEST_CASE("Hodge star table is cyclic and sign-consistent") {
    using H = HodgeConvention;
    static_assert(H::star(Coframe::dt) == H::TwoForm{Coframe::dx, Coframe::dy});
    static_assert(H::star(Coframe::dx) == H::TwoForm{Coframe::dy, Coframe::dt});
    static_assert(H::star(Coframe::dy) == H::TwoForm{Coframe::dt, Coframe::dx});
    CHECK(H::star(H::TwoForm{Coframe::dy, Coframe::dx}) == std::pair<int, Coframe>{-1, Coframe::dt});
    CHECK(H::star(H::TwoForm{Coframe::dt, Coframe::dy}) == std::pair<int, Coframe>{-1, Coframe::dx});
}
