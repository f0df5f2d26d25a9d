#include "monolab/report.hpp"

#include "monolab/analysis.hpp"
#include "monolab/diffcheck.hpp"
#include "monolab/errors.hpp"
#include "monolab/pullback.hpp"
#include "monolab/sampling.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>

namespace monolab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string point_label(const Point3& p) {
    return format_double(p.t) + ";" + format_double(p.x()) + ";" + format_double(p.y());
}

/// Rows and checks produced by one unit of work.
struct Output {
    std::vector<ReportRow> rows;
    std::vector<Check> checks;
    std::vector<std::string> errors;
};

struct Context {
    const RunConfig& cfg;
    ModelPtr model;
    std::string label;
    bool monopole = true;

    ReportRow row(const char* suite, std::string quantity, std::string point, double key, double value,
                  std::string aux1 = {}, std::string aux2 = {}) const {
        return ReportRow{suite, label, std::move(quantity), std::move(point), key, value, std::move(aux1),
                         std::move(aux2)};
    }
};

using Task = std::function<void(Output&)>;

void check(Output& out, const Context& ctx, const char* suite, std::string name, bool passed, std::string detail,
           double key = 0.0) {
    out.rows.push_back(ctx.row(suite, "assert:" + name, std::to_string(static_cast<long long>(key)), key,
                               passed ? 1.0 : 0.0, passed ? "pass" : "fail", detail));
    out.checks.push_back({name, passed, std::move(detail)});
}

std::vector<double> step_ladder(double fd_step) {
    return {100.0 * fd_step, 30.0 * fd_step, 10.0 * fd_step, 3.0 * fd_step, fd_step};
}

bool order_ok(double order) { return std::isinf(order) || (order >= 1.7 && order <= 2.3); }

// --- verify ----------------------------------------------------------------

void add_verify(std::vector<Task>& tasks, const Context& ctx) {
    const auto points = random_points(ctx.cfg.n_points, 0.3, 1.0, ctx.cfg.seed);
    for (std::size_t i = 0; i < points.size(); ++i) {
        tasks.push_back([&ctx, p = points[i], i](Output& out) {
            const double key = static_cast<double>(i);
            const ResidualReport rep = bogomolny_residual(*ctx.model, p, ctx.cfg.fd_step);
            const ConvergenceFit conv = convergence_order(
                [&](double h) { return bogomolny_residual(*ctx.model, p, h).total; }, step_ladder(ctx.cfg.fd_step));
            const std::string where = point_label(p);
            out.rows.push_back(ctx.row("verify", "bogomolny_residual", where, key, rep.total,
                                       format_double(conv.order), ctx.monopole ? "monopole" : "not_a_monopole"));
            for (const auto& [name, v] : rep.components) {
                out.rows.push_back(ctx.row("verify", "component:" + name, where, key, v));
            }
            out.rows.push_back(ctx.row("verify", "convergence_order", where, key, conv.order));
            if (ctx.monopole) {
                check(out, ctx, "verify", "bogomolny_residual_below_1e-6", rep.total < 1e-6,
                      where + " residual " + format_double(rep.total), key);
                check(out, ctx, "verify", "bogomolny_order_in_1.7_2.3", order_ok(conv.order),
                      where + " order " + format_double(conv.order), key);
            }
        });
    }
}

// --- pullback --------------------------------------------------------------

void add_pullback(std::vector<Task>& tasks, const Context& ctx) {
    const auto points = random_points(ctx.cfg.n_points, 0.3, 1.0, ctx.cfg.seed);
    UniformSource phases(ctx.cfg.seed ^ 0x5bd1e995ULL);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double theta = phases.uniform(0.0, 2.0 * std::numbers::pi);
        tasks.push_back([&ctx, p = points[i], theta, i](Output& out) {
            const double key = static_cast<double>(i);
            const Point4 q = hopf_lift(p, theta);
            const auto steps = step_ladder(ctx.cfg.fd_step);
            std::map<double, InstantonResidual> cache;
            for (double h : steps) cache.emplace(h, instanton_residual(*ctx.model, q, h));
            const InstantonResidual& r = cache.at(ctx.cfg.fd_step);
            const std::string where = point_label(p);
            auto order_of = [&](double InstantonResidual::*field) {
                // f02 vanishes identically in mini frames and f20 has no
                // truncation term; either may sit at roundoff.
                return convergence_order([&](double h) { return cache.at(h).*field; }, steps, kRoundoffNoise).order;
            };
            const double o02 = order_of(&InstantonResidual::f02);
            const double o20 = order_of(&InstantonResidual::f20);
            const double oc = order_of(&InstantonResidual::contraction);
            out.rows.push_back(ctx.row("pullback", "instanton_f02", where, key, r.f02, format_double(o02)));
            out.rows.push_back(ctx.row("pullback", "instanton_f20", where, key, r.f20, format_double(o20)));
            out.rows.push_back(ctx.row("pullback", "instanton_contraction", where, key, r.contraction,
                                       format_double(oc), ctx.monopole ? "monopole" : "not_a_monopole"));
            double equi = 0.0;
            for (double th : {std::numbers::pi / 7, std::numbers::pi / 3, std::numbers::pi}) {
                equi = std::max(equi, equivariance_residual(*ctx.model, q, th));
            }
            out.rows.push_back(ctx.row("pullback", "equivariance_residual", where, key, equi));
            check(out, ctx, "pullback", "equivariance_below_1e-12", equi < 1e-12,
                  where + " residual " + format_double(equi), key);
            if (ctx.monopole) {
                const double worst = r.max();
                check(out, ctx, "pullback", "instanton_residual_below_1e-6", worst < 1e-6,
                      where + " residual " + format_double(worst), key);
                check(out, ctx, "pullback", "instanton_order_in_1.7_2.3",
                      order_ok(o02) && order_ok(o20) && order_ok(oc),
                      where + " orders " + format_double(o02) + "/" + format_double(o20) + "/" + format_double(oc),
                      key);
            }
        });
    }
    tasks.push_back([&ctx](Output& out) {
        ChargeVector cv;
        try {
            cv = extract_charges(*ctx.model, ctx.cfg.radii, ctx.cfg.n_sphere, ctx.cfg.seed);
        } catch (const ExtractionError& e) {
            out.rows.push_back(ctx.row("pullback", "extension_exponent", "", 0.0, kNaN, "charges_unavailable", e.what()));
            return;
        }
        const ExtensionProbe probe = extension_probe(*ctx.model, cv.charges, ctx.cfg.radii, ctx.cfg.n_sphere);
        out.rows.push_back(ctx.row("pullback", "extension_exponent", "", 0.0, probe.fit.exponent,
                                   format_double(probe.fit.fit_quality), format_double(probe.inverse_fit.slope)));
        for (const auto& [R, v] : probe.fit.samples) {
            out.rows.push_back(ctx.row("pullback", "extension_sup_norm", format_double(R), R, v));
        }
    });
}

// --- scatter ---------------------------------------------------------------

double rel_error(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

void add_scatter(std::vector<Task>& tasks, const Context& ctx) {
    const double eps = ctx.cfg.epsilon;
    const double tol = ctx.cfg.ode_tol;
    tasks.push_back([&ctx, eps, tol](Output& out) {
        try {
            const ChargeVector cv = scattering_pole_orders(*ctx.model, eps, ctx.cfg.radii, ctx.cfg.n_args, tol);
            for (std::size_t i = 0; i < cv.raw.size(); ++i) {
                out.rows.push_back(ctx.row("scatter", "pole_order", std::to_string(i), static_cast<double>(i),
                                           cv.raw[i], std::to_string(cv.charges[i]), format_double(cv.spread)));
            }
        } catch (const ExtractionError& e) {
            const ChargeVector& cv = e.partial();
            for (std::size_t i = 0; i < cv.raw.size(); ++i) {
                out.rows.push_back(ctx.row("scatter", "pole_order", std::to_string(i), static_cast<double>(i),
                                           cv.raw[i], "not_meromorphic", format_double(cv.spread)));
            }
        }
    });
    tasks.push_back([&ctx, eps, tol](Output& out) {
        const cplx w0{0.5, 0.0};
        const ScatteringMatrix S = scatter(*ctx.model, w0, -eps, eps, tol);
        Eigen::JacobiSVD<Mat> svd(S.matrix);
        const Eigen::VectorXd sv = svd.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            out.rows.push_back(ctx.row("scatter", "singular_value_w0.5", std::to_string(i), static_cast<double>(i),
                                       sv(i), format_double(S.tol)));
        }
        // d/dwbar of the scattering matrix by central differences.
        const double h = 1e-3;
        const cplx w1 = std::polar(0.4, 0.3);
        auto S_at = [&](cplx w) { return scatter(*ctx.model, w, -eps, eps, tol).matrix; };
        const Mat dx = (S_at(w1 + h) - S_at(w1 - h)) / (2.0 * h);
        const Mat dy = (S_at(w1 + cplx(0.0, h)) - S_at(w1 - cplx(0.0, h))) / (2.0 * h);
        const Mat dbar = 0.5 * (dx + I * dy);
        out.rows.push_back(ctx.row("scatter", "dbar_scatter", format_double(std::abs(w1)), 0.0, dbar.norm(),
                                   format_double(h)));
    });
    tasks.push_back([&ctx, eps, tol](Output& out) {
        UniformSource src(ctx.cfg.seed + 1);
        const ModelPtr dm = dual(ctx.model);
        double worst_comp = 0.0;
        double worst_dual = 0.0;
        for (int k = 0; k < 10; ++k) {
            double t[3] = {src.uniform(-1.0, 1.0), src.uniform(-1.0, 1.0), src.uniform(-1.0, 1.0)};
            std::sort(t, t + 3);
            const cplx w = std::polar(src.uniform(0.1, 1.0), src.uniform(0.0, 2.0 * std::numbers::pi));
            const Mat S12 = scatter(*ctx.model, w, t[0], t[1], tol).matrix;
            const Mat S23 = scatter(*ctx.model, w, t[1], t[2], tol).matrix;
            const Mat S13 = scatter(*ctx.model, w, t[0], t[2], tol).matrix;
            const double comp = rel_error(S23 * S12, S13);
            const Mat D13 = scatter(*dm, w, t[0], t[2], tol).matrix;
            const double du = rel_error(D13, S13.inverse().transpose());
            const std::string where = format_double(t[0]) + ";" + format_double(t[1]) + ";" + format_double(t[2]) +
                                      ";" + format_double(w.real()) + ";" + format_double(w.imag());
            out.rows.push_back(ctx.row("scatter", "composition_error", where, k, comp));
            out.rows.push_back(ctx.row("scatter", "dual_inverse_transpose_error", where, k, du));
            worst_comp = std::max(worst_comp, comp);
            worst_dual = std::max(worst_dual, du);
        }
        check(out, ctx, "scatter", "composition_within_100_tol", worst_comp <= 100.0 * tol,
              "max relative error " + format_double(worst_comp));
        check(out, ctx, "scatter", "dual_within_10_tol", worst_dual <= 10.0 * tol,
              "max relative error " + format_double(worst_dual));
    });
}

// --- classify / condition (D) -------------------------------------------

void emit_condition_d(Output& out, const Context& ctx, const ConditionDReport& d) {
    auto emit = [&](const std::vector<SectionGrowth>& sections, const char* which) {
        for (const auto& s : sections) {
            const std::string id = std::string(which) + ":side=" + std::to_string(s.side) +
                                   ":i=" + std::to_string(s.index);
            const double key = (s.side + 1) * 100 + s.index + (which[0] == 'd' ? 1000 : 0);
            out.rows.push_back(ctx.row("condition_d", "section_exponent", id, key, s.fit.exponent,
                                       format_double(s.fit.fit_quality), growth_class_name(s.growth)));
            out.rows.push_back(ctx.row("condition_d", "section_inverse_slope", id, key, s.inverse_fit.slope,
                                       format_double(s.inverse_fit.r2)));
            for (const auto& [R, v] : s.fit.samples) {
                out.rows.push_back(
                    ctx.row("condition_d", "section_log_norm", format_double(R), R, std::log(v), id));
            }
        }
    };
    emit(d.sections, "E");
    emit(d.dual_sections, "dual");
    out.rows.push_back(ctx.row("condition_d", "E_exponent", "", 0.0, d.E_exponent.exponent,
                               format_double(d.E_exponent.fit_quality)));
    out.rows.push_back(ctx.row("condition_d", "dual_exponent", "", 0.0, d.dual_exponent.exponent,
                               format_double(d.dual_exponent.fit_quality)));
    out.rows.push_back(ctx.row("condition_d", "passes", "", 0.0, d.passes ? 1.0 : 0.0, d.passes ? "pass" : "fail"));
}

void add_classify(std::vector<Task>& tasks, const Context& ctx, bool emit_d) {
    tasks.push_back([&ctx, emit_d](Output& out) {
        const auto& cfg = ctx.cfg;
        const Classification c =
            classify_dirac(*ctx.model, cfg.radii, cfg.n_sphere, kDiracTol, cfg.seed, cfg.epsilon, false);
        for (const auto& [R, v] : c.phi_fit.samples) {
            out.rows.push_back(ctx.row("classify", "phi_sup", format_double(R), R, v));
        }
        out.rows.push_back(ctx.row("classify", "phi_exponent", "", 0.0, c.phi_fit.exponent,
                                   format_double(c.phi_fit.fit_quality), verdict_name(c.verdict)));
        out.rows.push_back(ctx.row("classify", "verdict", "", 0.0, static_cast<double>(c.verdict),
                                   verdict_name(c.verdict), c.note));
        const ConditionDReport d = condition_D_check(*ctx.model, cfg.epsilon, default_rays(), cfg.radii, cfg.ode_tol);
        out.rows.push_back(
            ctx.row("classify", "condition_d_passes", "", 0.0, d.passes ? 1.0 : 0.0, d.passes ? "pass" : "fail"));
        if (emit_d) emit_condition_d(out, ctx, d);
        check(out, ctx, "classify", "verdict_decided", c.verdict != Verdict::inconclusive,
              std::string("verdict ") + verdict_name(c.verdict) + ", exponent " + format_double(c.phi_fit.exponent));
        check(out, ctx, "classify", "dirac_iff_condition_d", (c.verdict == Verdict::dirac) == d.passes,
              std::string("verdict ") + verdict_name(c.verdict) + ", condition (D) " + (d.passes ? "passes" : "fails"));
    });
}

void add_condition_d(std::vector<Task>& tasks, const Context& ctx) {
    tasks.push_back([&ctx](Output& out) {
        const auto& cfg = ctx.cfg;
        emit_condition_d(out, ctx, condition_D_check(*ctx.model, cfg.epsilon, default_rays(), cfg.radii, cfg.ode_tol));
    });
}

// --- charges / asymptotics -------------------------------------------------

void add_charges(std::vector<Task>& tasks, const Context& ctx) {
    tasks.push_back([&ctx](Output& out) {
        try {
            const ChargeVector cv = extract_charges(*ctx.model, ctx.cfg.radii, ctx.cfg.n_sphere, ctx.cfg.seed);
            for (std::size_t i = 0; i < cv.charges.size(); ++i) {
                out.rows.push_back(ctx.row("charges", "charge", std::to_string(i), static_cast<double>(i),
                                           cv.charges[i], format_double(cv.raw[i]), format_double(cv.spread)));
            }
        } catch (const ExtractionError& e) {
            const ChargeVector& cv = e.partial();
            for (std::size_t i = 0; i < cv.raw.size(); ++i) {
                out.rows.push_back(ctx.row("charges", "charge", std::to_string(i), static_cast<double>(i), kNaN,
                                           format_double(cv.raw[i]), "extraction_failed"));
            }
        }
    });
}

void add_asymptotics(std::vector<Task>& tasks, const Context& ctx) {
    tasks.push_back([&ctx](Output& out) {
        const auto& cfg = ctx.cfg;
        ChargeVector cv;
        try {
            cv = extract_charges(*ctx.model, cfg.radii, cfg.n_sphere, cfg.seed);
        } catch (const ExtractionError& e) {
            out.rows.push_back(ctx.row("asymptotics", "p1_exponent", "", 0.0, kNaN, "charges_unavailable", e.what()));
            return;
        }
        std::string charges;
        for (int k : cv.charges) charges += (charges.empty() ? "" : ";") + std::to_string(k);
        const AsymptoticsReport a = asymptotics_check(*ctx.model, cv.charges, cfg.radii, cfg.n_sphere, cfg.seed);
        for (const auto& [R, v] : a.p1_fit.samples) {
            out.rows.push_back(ctx.row("asymptotics", "a_minus_id_sup", format_double(R), R, v));
        }
        for (const auto& [R, v] : a.grad_rphi_fit.samples) {
            out.rows.push_back(ctx.row("asymptotics", "grad_rphi_sup_at", format_double(R), R, v));
        }
        out.rows.push_back(ctx.row("asymptotics", "p1_exponent", "", 0.0, a.p1_exponent,
                                   format_double(a.p1_fit.fit_quality), charges));
        out.rows.push_back(ctx.row("asymptotics", "p2_sup", "", 0.0, a.p2_sup, charges));
        out.rows.push_back(ctx.row("asymptotics", "p3_sup", "t", 0.0, a.p3_sup[0], charges));
        out.rows.push_back(ctx.row("asymptotics", "p3_sup", "w", 1.0, a.p3_sup[1], charges));
        out.rows.push_back(ctx.row("asymptotics", "p3_sup", "wbar", 2.0, a.p3_sup[2], charges));
        out.rows.push_back(ctx.row("asymptotics", "grad_rphi_sup", "", 0.0, a.grad_rphi_sup,
                                   format_double(a.grad_rphi_fit.exponent)));
    });
}

void add_tasks(std::vector<Task>& tasks, const Context& ctx) {
    const Suite s = ctx.cfg.suite;
    const bool all = s == Suite::all;
    if (all || s == Suite::verify) add_verify(tasks, ctx);
    if (all || s == Suite::pullback) add_pullback(tasks, ctx);
    if (all || s == Suite::scatter) add_scatter(tasks, ctx);
    if (all || s == Suite::classify) add_classify(tasks, ctx, all);
    if (s == Suite::condition_d) add_condition_d(tasks, ctx);
    if (all || s == Suite::charges) add_charges(tasks, ctx);
    if (all || s == Suite::asymptotics) add_asymptotics(tasks, ctx);
}

int suite_rank(const std::string& s) {
    static const std::vector<std::string> order{"verify",  "pullback", "scatter",    "classify",
                                                "condition_d", "charges", "asymptotics", "run"};
    const auto it = std::find(order.begin(), order.end(), s);
    return static_cast<int>(it - order.begin());
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string radii_text(const std::vector<double>& radii) {
    std::string out;
    for (double r : radii) out += (out.empty() ? "" : ";") + format_double(r);
    return out;
}

std::vector<std::pair<std::string, std::string>> header_of(const RunReport& r) {
    const RunConfig& c = r.config;
    return {{"config_hash", c.hash()},
            {"model", r.model_label},
            {"suite", suite_name(c.suite)},
            {"ode_tol", format_double(c.ode_tol)},
            {"fd_step", format_double(c.fd_step)},
            {"radii", radii_text(c.radii)},
            {"n_sphere", std::to_string(c.n_sphere)},
            {"epsilon", format_double(c.epsilon)},
            {"seed", std::to_string(c.seed)},
            {"n_points", std::to_string(c.n_points)},
            {"n_args", std::to_string(c.n_args)},
            {"status", r.complete() ? "complete" : "incomplete"},
            {"failed_checks", std::to_string(r.failed_checks())}};
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int RunReport::failed_checks() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

int exit_status(const std::vector<RunReport>& reports) {
    bool failed = false;
    for (const auto& r : reports) {
        if (!r.complete()) return kExitNumerical;
        failed = failed || r.failed_checks() > 0;
    }
    return failed ? kExitAssertion : kExitPass;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<RunReport> run_suites(const std::vector<RunConfig>& configs, int jobs) {
    std::vector<std::unique_ptr<Context>> contexts;
    std::vector<RunReport> reports(configs.size());
    std::vector<std::pair<std::size_t, Task>> tasks;  // (config index, task)
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const ModelPtr model = build_model(configs[c].model);
        contexts.push_back(std::make_unique<Context>(
            Context{configs[c], model, model->label(), configs[c].model.monopole_by_construction()}));
        reports[c].config = configs[c];
        reports[c].model_label = contexts.back()->label;
        std::vector<Task> local;
        add_tasks(local, *contexts.back());
        for (auto& t : local) tasks.emplace_back(c, std::move(t));
    }
    std::vector<Output> outputs(tasks.size());
    parallel_for(tasks.size(), jobs, [&](std::size_t i) {
        try {
            tasks[i].second(outputs[i]);
        } catch (const Error& e) {
            outputs[i].errors.push_back(e.what());
        }
    });
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        RunReport& r = reports[tasks[i].first];
        const Context& ctx = *contexts[tasks[i].first];
        for (auto& row : outputs[i].rows) r.rows.push_back(std::move(row));
        for (auto& c : outputs[i].checks) r.checks.push_back(std::move(c));
        for (auto& e : outputs[i].errors) {
            r.rows.push_back(ctx.row("run", "error", std::to_string(i), static_cast<double>(i), kNaN, "incomplete", e));
            r.errors.push_back(std::move(e));
        }
    }
    for (auto& r : reports) {
        std::stable_sort(r.rows.begin(), r.rows.end(), [](const ReportRow& a, const ReportRow& b) {
            const int sa = suite_rank(a.suite), sb = suite_rank(b.suite);
            if (sa != sb) return sa < sb;
            if (a.quantity != b.quantity) return a.quantity < b.quantity;
            return a.sort_key < b.sort_key;
        });
    }
    return reports;
}

RunReport run_suite(const RunConfig& config, int jobs) { return run_suites({config}, jobs).front(); }

std::string render_csv(const std::vector<RunReport>& reports) {
    std::ostringstream os;
    os << "# monolab report\n";
    os << "# configs=" << reports.size() << "\n";
    os << "# exit_status=" << exit_status(reports) << "\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (const auto& [k, v] : header_of(reports[i])) os << "# [" << i << "] " << k << "=" << v << "\n";
    }
    os << "suite,model,quantity,R_or_point,value,aux1,aux2,config_hash\n";
    for (const auto& r : reports) {
        const std::string hash = r.config.hash();
        for (const auto& row : r.rows) {
            os << csv_field(row.suite) << ',' << csv_field(row.model) << ',' << csv_field(row.quantity) << ','
               << csv_field(row.point) << ',' << format_double(row.value) << ',' << csv_field(row.aux1) << ','
               << csv_field(row.aux2) << ',' << hash << '\n';
        }
    }
    return os.str();
}

std::string render_json(const std::vector<RunReport>& reports) {
    using ordered = nlohmann::ordered_json;
    ordered doc;
    doc["exit_status"] = exit_status(reports);
    ordered list = ordered::array();
    for (const auto& r : reports) {
        ordered entry;
        ordered header = ordered::object();
        for (const auto& [k, v] : header_of(r)) header[k] = v;
        entry["header"] = header;
        ordered rows = ordered::array();
        const std::string hash = r.config.hash();
        for (const auto& row : r.rows) {
            ordered j;
            j["suite"] = row.suite;
            j["model"] = row.model;
            j["quantity"] = row.quantity;
            j["R_or_point"] = row.point;
            // Non-finite values have no JSON number form; keep their text.
            if (std::isfinite(row.value)) {
                j["value"] = row.value;
            } else {
                j["value"] = format_double(row.value);
            }
            j["aux1"] = row.aux1;
            j["aux2"] = row.aux2;
            j["config_hash"] = hash;
            rows.push_back(j);
        }
        entry["rows"] = rows;
        list.push_back(entry);
    }
    doc["configs"] = list;
    return doc.dump(2) + "\n";
}

std::string render(const std::vector<RunReport>& reports, OutputFormat format) {
    return format == OutputFormat::csv ? render_csv(reports) : render_json(reports);
}

}  // namespace monolab
