#include "monolab/errors.hpp"
#include "monolab/fit.hpp"
#include "monolab/linalg.hpp"
#include "monolab/ode.hpp"
#include "monolab/sampling.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace monolab;
using Catch::Approx;

TEST_CASE("Cholesky factor and metric norms") {
    Mat H(2, 2);
    H << 4.0, cplx(1.0, 1.0), cplx(1.0, -1.0), 3.0;
    const Mat L = cholesky_factor(H);
    CHECK((L * L.adjoint() - H).norm() < 1e-14);
    CHECK(std::abs(L(0, 1)) == 0.0);

    Mat bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(cholesky_factor(bad), ModelDomainError);

    // In the metric diag(4, 1) the endomorphism e1 -> e2 stretches the unit
    // vector e1/2 to e2/2 of norm 1/2.
    Mat D = Mat::Zero(2, 2);
    D(0, 0) = 4.0;
    D(1, 1) = 1.0;
    Mat N = Mat::Zero(2, 2);
    N(1, 0) = 1.0;
    CHECK(h_operator_norm(N, D) == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("self-adjoint spectrum in a non-standard metric") {
    Mat H(2, 2);
    H << 2.0, 0.5, 0.5, 1.0;
    Mat diag = Mat::Zero(2, 2);
    diag(0, 0) = 3.0;
    diag(1, 1) = -1.0;
    // M = S diag S^{-1} with S h-unitary is h-self-adjoint; simpler: H^{-1} K
    // with K Hermitian is always h-self-adjoint.
    Mat K(2, 2);
    K << 1.0, cplx(0.0, 2.0), cplx(0.0, -2.0), -1.0;
    const Mat M = H.inverse() * K;
    const Eigen::VectorXd ev = h_selfadjoint_eigenvalues(M, H);
    const Eigen::VectorXcd direct = M.eigenvalues();
    std::vector<double> re{direct(0).real(), direct(1).real()};
    std::sort(re.begin(), re.end());
    CHECK(ev(0) == Approx(re[0]).margin(1e-12));
    CHECK(ev(1) == Approx(re[1]).margin(1e-12));
    CHECK(block_diag(H, K).rows() == 4);
}

TEST_CASE("power-law fits") {
    std::vector<std::pair<double, double>> s;
    for (double R : geometric_radii(0.5, 0.005, 12)) s.emplace_back(R, 3.0 * std::pow(R, -1.5));
    const GrowthFit g = fit_growth(s);
    CHECK(g.exponent == Approx(-1.5).margin(1e-12));
    CHECK(g.constant == Approx(std::log(3.0)).margin(1e-12));
    CHECK(g.fit_quality == Approx(1.0).margin(1e-12));

    std::vector<std::pair<double, double>> zeros;
    for (double R : geometric_radii(0.5, 0.005, 5)) zeros.emplace_back(R, 0.0);
    CHECK(std::isinf(fit_growth(zeros).exponent));

    std::vector<std::pair<double, double>> narrow{{0.5, 1.0}, {0.4, 1.0}, {0.3, 1.0}, {0.2, 1.0}};
    CHECK_THROWS_AS(fit_growth(narrow), NumericalError);

    std::vector<std::pair<double, double>> ess;
    for (double R : geometric_radii(0.5, 0.005, 12)) ess.emplace_back(R, std::exp(0.5 / R));
    const LinearFit inv = fit_inverse_radius(ess);
    CHECK(inv.slope == Approx(0.5).margin(1e-10));
    CHECK(inv.r2 == Approx(1.0).margin(1e-12));
}

TEST_CASE("geometric radii and seeded sampling") {
    const auto r = geometric_radii(0.5, 0.005, 12);
    REQUIRE(r.size() == 12);
    CHECK(r.front() == Approx(0.5));
    CHECK(r.back() == Approx(0.005));
    CHECK(spans_two_decades(r));

    const auto a = random_points(10, 0.3, 1.0, 9), b = random_points(10, 0.3, 1.0, 9);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].t == b[i].t);
        CHECK(a[i].w == b[i].w);
        CHECK(a[i].radius() >= 0.3 - 1e-12);
        CHECK(a[i].radius() <= 1.0 + 1e-12);
    }
    const auto dirs = sphere_directions(16, 1);
    REQUIRE(dirs.size() == 16);
    CHECK(dirs[0][0] == Approx(1.0));
    CHECK(dirs[1][0] == Approx(-1.0));
    for (const auto& d : dirs) CHECK(std::hypot(d[0], d[1], d[2]) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("linear flow integrator") {
    // dY/dt = diag(1, -2) Y from 0 to 1.
    Mat G = Mat::Zero(2, 2);
    G(0, 0) = 1.0;
    G(1, 1) = -2.0;
    LinearFlowOptions opts;
    opts.tol = 1e-12;
    const LinearFlowResult r =
        integrate_linear_flow([&](double) { return G; }, 0.0, 1.0, Mat::Identity(2, 2), opts, {0.5});
    const double scale = std::exp(r.log_scale);
    CHECK(std::abs(r.Y(0, 0) * scale - std::exp(1.0)) < 1e-10);
    CHECK(std::abs(r.Y(1, 1) * scale - std::exp(-2.0)) < 1e-10);
    REQUIRE(r.samples.size() == 1);
    CHECK(std::abs(r.samples[0].Y(0, 0) * std::exp(r.samples[0].log_scale) - std::exp(0.5)) < 1e-10);

    // Backwards, and with growth far beyond double range.
    const LinearFlowResult big = integrate_linear_flow([](double) { return Mat::Constant(1, 1, 1000.0); }, 1.0, 0.0,
                                                       Mat::Identity(1, 1), opts);
    CHECK(std::log(std::abs(big.Y(0, 0))) + big.log_scale == Approx(-1000.0).epsilon(1e-9));
}
