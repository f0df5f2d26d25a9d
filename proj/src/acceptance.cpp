#include "monolab/acceptance.hpp"

#include "monolab/analysis.hpp"
#include "monolab/config.hpp"
#include "monolab/diffcheck.hpp"
#include "monolab/pullback.hpp"
#include "monolab/report.hpp"
#include "monolab/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>

namespace monolab {

namespace {

constexpr std::uint64_t kSeed = 42;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

/// Collects sub-check outcomes for one criterion.
struct Outcome {
    CriterionResult& res;

    void expect(bool ok, const std::string& what) {
        res.details.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + what);
        res.passed = res.passed && ok;
    }
    void note(const std::string& what) { res.details.push_back("  note  " + what); }
};

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }
bool order_ok(double order) { return std::isinf(order) || in(order, 1.7, 2.3); }

ModelPtr mixed_sum() {
    const double c = std::cos(0.6), s = std::sin(0.6);
    const cplx ph = std::polar(1.0, 0.9);
    GaugeGenerator g;
    g.constant = Mat(2, 2);
    g.constant << c, -s * std::conj(ph), s * ph, c;
    return gauge(direct_sum({dirac_model(2), dirac_model(-1)}), g, true);
}

ModelPtr twist_by(const char* monomial) {
    return metric_twist(dirac_model(1), Polynomial({Polynomial::parse_monomial(monomial, 1.0)}));
}

std::vector<double> inner_radii() { return geometric_radii(0.05, 0.0005, 12); }

struct Named {
    std::string name;
    ModelPtr model;
};

std::vector<Named> verification_models() {
    return {{"L(1)", dirac_model(1)},
            {"L(3)", dirac_model(3)},
            {"L(2)+L(-1)", direct_sum({dirac_model(2), dirac_model(-1)})},
            {"counterexample", counterexample_model()}};
}

const std::vector<double> kLadder{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};

// 1 -----------------------------------------------------------------------

void criterion_bogomolny(Outcome& o) {
    const auto points = random_points(20, 0.3, 1.0, kSeed);
    for (const auto& [name, model] : verification_models()) {
        double worst = 0.0, lo = INFINITY, hi = -INFINITY;
        std::string worst_at;
        int over = 0;
        for (const Point3& p : points) {
            const double r = bogomolny_residual(*model, p, 1e-4).total;
            if (r >= 1e-6) ++over;
            if (r > worst) {
                worst = r;
                worst_at = p.str() + " R=" + num(p.radius());
            }
            const double ord =
                convergence_order([&](double h) { return bogomolny_residual(*model, p, h).total; }, kLadder).order;
            lo = std::min(lo, ord);
            hi = std::max(hi, ord);
        }
        o.expect(worst < 1e-6, name + ": max residual " + num(worst) + " at " + worst_at + " (" +
                                   std::to_string(over) + "/20 points >= 1e-6)");
        o.expect(order_ok(lo) && order_ok(hi), name + ": convergence orders in [" + num(lo) + ", " + num(hi) + "]");
    }
}

// 2 -----------------------------------------------------------------------

void criterion_instanton(Outcome& o) {
    const auto points = random_points(20, 0.3, 1.0, kSeed);
    UniformSource phases(kSeed + 7);
    std::vector<Point4> lifts;
    for (const Point3& p : points) lifts.push_back(hopf_lift(p, phases.uniform(0.0, 2.0 * std::numbers::pi)));
    for (const auto& [name, model] : verification_models()) {
        double worst = 0.0, equi = 0.0, lo = INFINITY, hi = -INFINITY;
        for (const Point4& q : lifts) {
            std::vector<InstantonResidual> ladder;
            for (double h : kLadder) ladder.push_back(instanton_residual(*model, q, h));
            worst = std::max(worst, ladder.back().max());
            for (auto field : {&InstantonResidual::f02, &InstantonResidual::f20, &InstantonResidual::contraction}) {
                std::size_t k = 0;
                const double ord =
                    convergence_order([&](double) { return ladder[k++].*field; }, kLadder, kRoundoffNoise).order;
                lo = std::min(lo, ord);
                hi = std::max(hi, ord);
            }
            for (double th : {std::numbers::pi / 7, std::numbers::pi / 3, std::numbers::pi}) {
                equi = std::max(equi, equivariance_residual(*model, q, th));
            }
        }
        o.expect(worst < 1e-6, name + ": max of f02, f20, contraction " + num(worst));
        o.expect(order_ok(lo) && order_ok(hi),
                 name + ": orders in [" + num(lo) + ", " + num(hi) + "] (residuals below 1e-10 count as converged)");
        o.expect(equi < 1e-12, name + ": equivariance residual " + num(equi));
    }
    const ModelPtr tw = twist_by("x");
    double contraction = 0.0, f02 = 0.0;
    for (const Point4& q : lifts) {
        const InstantonResidual r = instanton_residual(*tw, q, 1e-4);
        contraction = std::max(contraction, r.contraction);
        f02 = std::max(f02, r.f02);
    }
    o.expect(contraction > 1e-2, "twist(L(1), f=x): max contraction " + num(contraction) + " > 1e-2");
    o.expect(f02 < 1e-6, "twist(L(1), f=x): f02 " + num(f02) + " < 1e-6");
    o.note("x is harmonic, so e^x H is again a solution; twist(L(1), f=x^2) for contrast: contraction " +
           num(instanton_residual(*twist_by("x^2"), lifts.front(), 1e-4).contraction));
}

// 3 -----------------------------------------------------------------------

void criterion_scattering(Outcome& o) {
    const ModelPtr L3 = dirac_model(3);
    const ScatteringMatrix S = scatter(*L3, 0.5, -0.5, 0.5, 1e-10);
    const double rel = std::abs(S.matrix(0, 0) - 0.015625) / 0.015625;
    o.expect(rel < 1e-6, "L(3), w=0.5: S = " + num(S.matrix(0, 0).real()) + " relative error " + num(rel));

    GaugeGenerator moving;
    moving.diagonal = {DiagonalFactor{0, 1.0, {0.0, 0.0}, {0.0, 0.0}}, DiagonalFactor{0, 0.0, {0.0, 0.0}, {0.5, 0.0}}};
    const std::vector<Named> models{{"L(3)", L3},
                                    {"counterexample", counterexample_model()},
                                    {"gauge(L(2)+L(-1); diag(e^t, e^{wbar/2}))",
                                     gauge(direct_sum({dirac_model(2), dirac_model(-1)}), moving, false)}};
    for (const auto& [name, model] : models) {
        UniformSource src(kSeed);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            double t[3] = {src.uniform(-1.0, 1.0), src.uniform(-1.0, 1.0), src.uniform(-1.0, 1.0)};
            std::sort(t, t + 3);
            const cplx w = std::polar(src.uniform(0.1, 1.0), src.uniform(0.0, 2.0 * std::numbers::pi));
            const Mat S13 = scatter(*model, w, t[0], t[2], 1e-10).matrix;
            const Mat S23S12 = scatter(*model, w, t[1], t[2], 1e-10).matrix * scatter(*model, w, t[0], t[1], 1e-10).matrix;
            worst = std::max(worst, (S13 - S23S12).norm() / std::max(1.0, S13.norm()));
        }
        o.expect(worst < 1e-8, name + ": composition error " + num(worst));
    }
}

// 4 -----------------------------------------------------------------------

void criterion_charges(Outcome& o) {
    const auto radii = default_radii();
    for (int m = -2; m <= 3; ++m) {
        const ChargeVector cv = scattering_pole_orders(*dirac_model(m), 0.5, radii, 8);
        o.expect(cv.charges.size() == 1 && cv.charges[0] == m && cv.spread < 0.05,
                 "L(" + std::to_string(m) + "): pole order " + num(cv.raw[0]) + " spread " + num(cv.spread));
    }
    const ChargeVector cv = extract_charges(*mixed_sum(), radii, 64, kSeed);
    o.expect(cv.charges == std::vector<int>{-1, 2} && cv.spread < 0.1,
             "mixed L(2)+L(-1): charges " + num(cv.raw[0]) + ", " + num(cv.raw[1]) + " spread " + num(cv.spread));
}

// 5 -----------------------------------------------------------------------

void criterion_classify(Outcome& o) {
    const auto radii = default_radii();
    const std::vector<Named> sums{{"L(1)", dirac_model(1)},
                                  {"L(3)", dirac_model(3)},
                                  {"L(-2)", dirac_model(-2)},
                                  {"L(2)+L(-1)", direct_sum({dirac_model(2), dirac_model(-1)})},
                                  {"mixed L(2)+L(-1)", mixed_sum()}};
    for (const auto& [name, model] : sums) {
        const Classification c = classify_dirac(*model, radii, 64, kDiracTol, kSeed, 0.5, false);
        o.expect(c.verdict == Verdict::dirac && std::abs(c.phi_fit.exponent + 1.0) <= 0.05,
                 name + ": " + verdict_name(c.verdict) + ", exponent " + num(c.phi_fit.exponent));
    }
    const Classification tw = classify_dirac(*twist_by("t"), inner_radii(), 64, kDiracTol, kSeed, 0.5, false);
    o.expect(tw.verdict == Verdict::dirac && std::abs(tw.phi_fit.exponent + 1.0) <= 0.05,
             "twist(L(1), f=t) over R in [0.0005, 0.05]: " + std::string(verdict_name(tw.verdict)) + ", exponent " +
                 num(tw.phi_fit.exponent));
    const Classification ce = classify_dirac(*counterexample_model(), radii, 64, kDiracTol, kSeed, 0.5, false);
    o.expect(ce.verdict == Verdict::not_dirac && std::abs(ce.phi_fit.exponent + 2.0) <= 0.1,
             "counterexample: " + std::string(verdict_name(ce.verdict)) + ", exponent " + num(ce.phi_fit.exponent));
}

// 6 -----------------------------------------------------------------------

void criterion_condition_d(Outcome& o) {
    const auto radii = default_radii();
    const auto rays = default_rays();
    const std::vector<Named> sums{{"L(0)", dirac_model(0)},
                                  {"L(1)", dirac_model(1)},
                                  {"L(3)", dirac_model(3)},
                                  {"L(2)+L(-1)", direct_sum({dirac_model(2), dirac_model(-1)})}};
    for (const auto& [name, model] : sums) {
        const ConditionDReport d = condition_D_check(*model, 0.5, rays, radii);
        bool finite = true;
        double quality = 1.0;
        for (const auto* list : {&d.sections, &d.dual_sections}) {
            for (const auto& s : *list) {
                finite = finite && std::isfinite(s.fit.exponent);
                quality = std::min(quality, s.fit.fit_quality);
            }
        }
        o.expect(d.passes && finite && quality >= 0.99,
                 name + ": passes=" + (d.passes ? "yes" : "no") + ", min fit quality " + num(quality) +
                     ", E exponent " + num(d.E_exponent.exponent) + ", dual exponent " + num(d.dual_exponent.exponent));
    }
    const ConditionDReport ce = condition_D_check(*counterexample_model(), 0.5, rays, radii);
    const bool e_side_bounded = std::all_of(ce.sections.begin(), ce.sections.end(),
                                            [](const SectionGrowth& s) { return s.bounded_polynomially(); });
    double slope_lo = INFINITY, slope_hi = -INFINITY;
    bool dual_fails = true;
    for (const auto& s : ce.dual_sections) {
        slope_lo = std::min(slope_lo, s.inverse_fit.slope);
        slope_hi = std::max(slope_hi, s.inverse_fit.slope);
        dual_fails = dual_fails && s.growth == GrowthClass::superpolynomial_growth;
    }
    o.expect(!ce.passes && e_side_bounded && dual_fails && std::abs(slope_lo - 0.5) <= 0.05 &&
                 std::abs(slope_hi - 0.5) <= 0.05,
             "counterexample: fails via the dual side only; log|s| vs 1/R slopes in [" + num(slope_lo) + ", " +
                 num(slope_hi) + "]");

    for (const RunConfig& cfg : parse_config_set(zoo_document())) {
        const ModelPtr m = build_model(cfg.model);
        const Classification c = classify_dirac(*m, cfg.radii, cfg.n_sphere, kDiracTol, cfg.seed, cfg.epsilon, false);
        const ConditionDReport d = condition_D_check(*m, cfg.epsilon, rays, cfg.radii, cfg.ode_tol);
        o.expect((c.verdict == Verdict::dirac) == d.passes && c.verdict != Verdict::inconclusive,
                 m->label() + ": verdict " + verdict_name(c.verdict) + ", condition (D) " +
                     (d.passes ? "passes" : "fails"));
    }
}

// 7 -----------------------------------------------------------------------

void criterion_asymptotics(Outcome& o) {
    const AsymptoticsReport a = asymptotics_check(*twist_by("t"), {1}, default_radii(), 64, kSeed);
    o.expect(a.p1_exponent >= 0.9, "p1 exponent " + num(a.p1_exponent));
    o.expect(in(a.p2_sup, 0.45, 0.55), "p2 sup " + num(a.p2_sup));
    o.expect(std::all_of(a.p3_sup.begin(), a.p3_sup.end(), [](double v) { return std::isfinite(v); }),
             "p3 sups t/w/wbar " + num(a.p3_sup[0]) + "/" + num(a.p3_sup[1]) + "/" + num(a.p3_sup[2]));
    o.expect(std::isfinite(a.grad_rphi_sup) && a.grad_rphi_fit.exponent >= -0.1,
             "sup |nabla(R phi)| " + num(a.grad_rphi_sup) + ", exponent " + num(a.grad_rphi_fit.exponent));
}

// 8 -----------------------------------------------------------------------

struct Diagnostics {
    std::vector<std::pair<std::string, double>> values;
    void add(const std::string& k, double v) { values.emplace_back(k, v); }
};

Diagnostics scalar_diagnostics(const BundleModel& model, const std::vector<int>& charges) {
    Diagnostics d;
    const auto radii = default_radii();
    for (const Point3& p : random_points(5, 0.3, 1.0, kSeed + 3)) {
        const ResidualReport r = bogomolny_residual(model, p, 1e-4);
        for (const auto& [name, v] : r.components) d.add("bogomolny " + name + " " + p.str(), v);
        const InstantonResidual ir = instanton_residual(model, hopf_lift(p, 0.4), 1e-4);
        d.add("contraction " + p.str(), ir.contraction);
        d.add("f20 " + p.str(), ir.f20);
    }
    for (double R : radii) d.add("sup|phi| R=" + num(R), sup_on_sphere(model, R, 64, kSeed));
    const Classification c = classify_dirac(model, radii, 64, kDiracTol, kSeed, 0.5, false);
    d.add("phi exponent", c.phi_fit.exponent);
    const ChargeVector ch = extract_charges(model, radii, 64, kSeed);
    for (std::size_t i = 0; i < ch.raw.size(); ++i) d.add("charge raw " + std::to_string(i), ch.raw[i]);
    const ChargeVector po = scattering_pole_orders(model, 0.5, radii, 8);
    for (std::size_t i = 0; i < po.raw.size(); ++i) d.add("pole order raw " + std::to_string(i), po.raw[i]);
    const ConditionDReport cd = condition_D_check(model, 0.5, default_rays(), radii);
    d.add("condition D E exponent", cd.E_exponent.exponent);
    d.add("condition D dual exponent", cd.dual_exponent.exponent);
    const AsymptoticsReport a = asymptotics_check(model, charges, radii, 64, kSeed);
    d.add("p2 sup", a.p2_sup);
    for (int k = 0; k < 3; ++k) d.add("p3 sup " + std::to_string(k), a.p3_sup[static_cast<std::size_t>(k)]);
    return d;
}

void criterion_invariance(Outcome& o) {
    const ModelPtr base = direct_sum({dirac_model(2), dirac_model(-1)});
    const Diagnostics a = scalar_diagnostics(*base, {-1, 2});
    const Diagnostics b = scalar_diagnostics(*mixed_sum(), {-1, 2});
    double worst = 0.0;
    std::string worst_name;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = a.values[i].second, y = b.values[i].second;
        const double diff = (std::isinf(x) && x == y) ? 0.0 : std::abs(x - y) / std::max(1.0, std::abs(x));
        if (diff > worst || std::isnan(diff)) {
            worst = std::isnan(diff) ? INFINITY : diff;
            worst_name = a.values[i].first;
        }
    }
    o.expect(worst <= 1e-8, std::to_string(a.values.size()) +
                                " diagnostics of L(2)+L(-1) under a constant unitary gauge: largest change " +
                                num(worst) + (worst_name.empty() ? "" : " (" + worst_name + ")"));

    const std::vector<Named> sums{{"L(1)", dirac_model(1)},
                                  {"L(3)", dirac_model(3)},
                                  {"L(2)+L(-1)", base},
                                  {"mixed L(2)+L(-1)", mixed_sum()}};
    for (const auto& [name, model] : sums) {
        const auto radii = default_radii();
        const Classification p = classify_dirac(*model, radii, 64, kDiracTol, kSeed, 0.5, false);
        const Classification d = classify_dirac(*dual(model), radii, 64, kDiracTol, kSeed, 0.5, false);
        o.expect(p.verdict == d.verdict, name + ": primal " + verdict_name(p.verdict) + " (" +
                                             num(p.phi_fit.exponent) + "), dual " + verdict_name(d.verdict) + " (" +
                                             num(d.phi_fit.exponent) + ")");
    }

    GaugeGenerator moving;
    moving.diagonal = {DiagonalFactor{0, 1.0, {0.0, 0.0}, {0.0, 0.0}}, DiagonalFactor{1, 0.0, {0.3, 0.0}, {0.0, 0.0}}};
    const std::vector<Named> scattered{{"L(2)+L(-1)", base},
                                       {"mixed L(2)+L(-1)", mixed_sum()},
                                       {"counterexample", counterexample_model()},
                                       {"gauge(L(2)+L(-1); diag(e^t, w e^{0.3w}))", gauge(base, moving, false)}};
    const double tol = 1e-10;
    for (const auto& [name, model] : scattered) {
        const ModelPtr dm = dual(model);
        UniformSource src(kSeed + 11);
        double worst_rel = 0.0;
        for (int k = 0; k < 10; ++k) {
            double t0 = src.uniform(-1.0, 1.0), t1 = src.uniform(-1.0, 1.0);
            const cplx w = std::polar(src.uniform(0.1, 1.0), src.uniform(0.0, 2.0 * std::numbers::pi));
            const Mat S = scatter(*model, w, t0, t1, tol).matrix;
            const Mat D = scatter(*dm, w, t0, t1, tol).matrix;
            const Mat expect = S.inverse().transpose();
            worst_rel = std::max(worst_rel, (D - expect).norm() / std::max(1.0, expect.norm()));
        }
        o.expect(worst_rel <= 10.0 * tol, name + ": dual scatter vs inverse-transpose " + num(worst_rel));
    }
}

// 9 -----------------------------------------------------------------------

void criterion_determinism(Outcome& o) {
    const auto configs = parse_config_set(zoo_document());
    const auto first = run_suites(configs, 1);
    const auto second = run_suites(configs, 1);
    const auto wide = run_suites(configs, 8);
    const std::string a = render_csv(first), b = render_csv(second), c = render_csv(wide);
    o.expect(a == b, "zoo, suite all: two runs with --jobs 1 give identical CSV (" + std::to_string(a.size()) +
                         " bytes)");
    o.expect(a == c, "zoo, suite all: --jobs 1 and --jobs 8 give identical CSV");
    o.expect(render_json(first) == render_json(wide), "the same holds for the JSON report");
}

struct Entry {
    const char* title;
    std::function<void(Outcome&)> run;
    double time_limit = 0.0;  // seconds; 0 for none
};

const std::vector<Entry>& table() {
    static const std::vector<Entry> t{
        {"Bogomolny residual and convergence order", criterion_bogomolny, 30.0},
        {"Pulled-back instanton residuals and equivariance", criterion_instanton},
        {"Scattering map exactness and composition", criterion_scattering},
        {"Pole orders and charge recovery", criterion_charges, 60.0},
        {"Dirac-type classification from |phi| growth", criterion_classify},
        {"Condition (D) and agreement with the classifier", criterion_condition_d},
        {"Asymptotic comparison with L(1) for the e^t twist", criterion_asymptotics},
        {"Invariance under unitary gauge and duality", criterion_invariance},
        {"Deterministic reports", criterion_determinism},
    };
    return t;
}

}  // namespace

CriterionResult run_criterion(int id) {
    if (id < 1 || id > kCriterionCount) throw Error("no acceptance criterion " + std::to_string(id));
    const Entry& e = table()[static_cast<std::size_t>(id - 1)];
    CriterionResult res;
    res.id = id;
    res.title = e.title;
    res.passed = true;
    Outcome o{res};
    const auto start = std::chrono::steady_clock::now();
    try {
        e.run(o);
    } catch (const std::exception& ex) {
        o.expect(false, std::string("error: ") + ex.what());
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.time_limit > 0.0) {
        o.expect(res.seconds < e.time_limit, "runtime " + num(res.seconds) + " s < " + num(e.time_limit) + " s");
    }
    return res;
}

int run_acceptance(const std::vector<int>& ids, std::ostream& out, bool verbose) {
    std::vector<int> todo = ids;
    if (todo.empty()) {
        for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
    }
    int failures = 0;
    for (int id : todo) {
        const CriterionResult r = run_criterion(id);
        if (verbose) {
            for (const auto& line : r.details) out << line << "\n";
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s criterion %d: %s (%.1f s)", r.passed ? "PASS" : "FAIL", r.id,
                      r.title.c_str(), r.seconds);
        out << buf << "\n";
        out.flush();
        if (!r.passed) ++failures;
    }
    return failures;
}

}  // namespace monolab
