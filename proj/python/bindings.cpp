#include "monolab/analysis.hpp"
#include "monolab/config.hpp"
#include "monolab/diffcheck.hpp"
#include "monolab/pullback.hpp"
#include "monolab/report.hpp"
#include "monolab/sampling.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace monolab;

namespace {

// Models are immutable; Python holds them through a non-const holder type.
using PyModel = std::shared_ptr<BundleModel>;

PyModel expose(const ModelPtr& m) { return std::const_pointer_cast<BundleModel>(m); }

std::vector<ModelPtr> unexpose(const std::vector<PyModel>& ms) { return {ms.begin(), ms.end()}; }

Chart parse_chart(const std::string& name) {
    if (name == "plus") return Chart::Plus;
    if (name == "minus") return Chart::Minus;
    if (name == "punctured") return Chart::Punctured;
    throw py::value_error("chart must be 'plus', 'minus' or 'punctured'");
}

Chart chart_or_default(const BundleModel& m, const Point3& p, const std::optional<std::string>& chart) {
    return chart ? parse_chart(*chart) : m.chart_for(p);
}

py::dict fit_dict(const GrowthFit& f) {
    py::dict d;
    d["exponent"] = f.exponent;
    d["constant"] = f.constant;
    d["fit_quality"] = f.fit_quality;
    d["samples"] = f.samples;
    return d;
}

py::dict charges_dict(const ChargeVector& cv) {
    py::dict d;
    d["charges"] = cv.charges;
    d["raw"] = cv.raw;
    d["spread"] = cv.spread;
    return d;
}

Polynomial polynomial(const std::vector<std::pair<std::string, double>>& terms) {
    std::vector<Monomial> ms;
    for (const auto& [text, coef] : terms) ms.push_back(Polynomial::parse_monomial(text, coef));
    return Polynomial(std::move(ms));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical checks for singular monopoles on R x C";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ModelDomainError>(m, "ModelDomainError", PyExc_ValueError);

    py::class_<BundleModel, PyModel>(m, "Model")
        .def_property_readonly("rank", &BundleModel::rank)
        .def_property_readonly("label", &BundleModel::label)
        .def(
            "metric",
            [](const BundleModel& self, double t, cplx w, std::optional<std::string> chart) {
                const Point3 p{t, w};
                return self.metric(p, chart_or_default(self, p, chart));
            },
            py::arg("t"), py::arg("w"), py::arg("chart") = py::none())
        .def(
            "higgs",
            [](const BundleModel& self, double t, cplx w, std::optional<std::string> chart) {
                const Point3 p{t, w};
                return self.frame_data(p, chart_or_default(self, p, chart)).phi;
            },
            py::arg("t"), py::arg("w"), py::arg("chart") = py::none(),
            "Higgs field phi at (t, w) in the frame of the given chart")
        .def("__repr__", [](const BundleModel& self) { return "<Model " + self.label() + ">"; });

    m.def("dirac_model", [](int k) { return expose(dirac_model(k)); }, py::arg("m"));
    m.def("counterexample_model", [] { return expose(counterexample_model()); });
    m.def("direct_sum", [](const std::vector<PyModel>& ms) { return expose(direct_sum(unexpose(ms))); },
          py::arg("models"));
    m.def("dual", [](const PyModel& model) { return expose(dual(model)); }, py::arg("model"));
    m.def(
        "metric_twist",
        [](const PyModel& model, const std::vector<std::pair<std::string, double>>& terms) {
            return expose(metric_twist(model, polynomial(terms)));
        },
        py::arg("model"), py::arg("terms"), "Twist H -> e^f H, f given as [(monomial, coefficient), ...]");
    m.def(
        "constant_gauge",
        [](const PyModel& model, const Mat& g) {
            GaugeGenerator gen;
            gen.constant = g;
            return expose(gauge(model, gen, true));
        },
        py::arg("model"), py::arg("g"), "Change of frame by a constant invertible matrix");

    m.def("geometric_radii", &geometric_radii, py::arg("start"), py::arg("stop"), py::arg("n"));
    m.def("default_radii", &default_radii);

    m.def(
        "bogomolny_residual",
        [](const PyModel& model, double t, cplx w, double step) {
            const ResidualReport r = bogomolny_residual(*model, Point3{t, w}, step);
            py::dict d;
            for (const auto& [name, v] : r.components) d[py::str(name)] = v;
            d["total"] = r.total;
            return d;
        },
        py::arg("model"), py::arg("t"), py::arg("w"), py::arg("step") = 1e-4);
    m.def(
        "instanton_residual",
        [](const PyModel& model, cplx u1, cplx u2, double step) {
            const InstantonResidual r = instanton_residual(*model, Point4{u1, u2}, step);
            py::dict d;
            d["f02"] = r.f02;
            d["f20"] = r.f20;
            d["contraction"] = r.contraction;
            return d;
        },
        py::arg("model"), py::arg("u1"), py::arg("u2"), py::arg("step") = 1e-4);

    m.def(
        "scatter",
        [](const PyModel& model, cplx w, double t_from, double t_to, double tol) {
            return scatter(*model, w, t_from, t_to, tol).matrix;
        },
        py::arg("model"), py::arg("w"), py::arg("t_from"), py::arg("t_to"), py::arg("tol") = 1e-10);
    m.def(
        "scattering_pole_orders",
        [](const PyModel& model, double eps, const std::vector<double>& radii, int n_args) {
            return charges_dict(scattering_pole_orders(*model, eps, radii, n_args));
        },
        py::arg("model"), py::arg("eps") = 0.5, py::arg("radii") = default_radii(), py::arg("n_args") = 8);
    m.def(
        "extract_charges",
        [](const PyModel& model, const std::vector<double>& radii, int n_samples, std::uint64_t seed) {
            return charges_dict(extract_charges(*model, radii, n_samples, seed));
        },
        py::arg("model"), py::arg("radii") = default_radii(), py::arg("n_samples") = 64, py::arg("seed") = 42);
    m.def(
        "sup_higgs_norm",
        [](const PyModel& model, double R, int n_samples, std::uint64_t seed) {
            return sup_on_sphere(*model, R, n_samples, seed);
        },
        py::arg("model"), py::arg("R"), py::arg("n_samples") = 64, py::arg("seed") = 42);
    m.def(
        "classify_dirac",
        [](const PyModel& model, const std::vector<double>& radii, int n_samples, double tol, std::uint64_t seed) {
            const Classification c = classify_dirac(*model, radii, n_samples, tol, seed, 0.5, false);
            py::dict d;
            d["verdict"] = verdict_name(c.verdict);
            d["phi_fit"] = fit_dict(c.phi_fit);
            d["note"] = c.note;
            return d;
        },
        py::arg("model"), py::arg("radii") = default_radii(), py::arg("n_samples") = 64,
        py::arg("tol") = kDiracTol, py::arg("seed") = 42);
    m.def(
        "condition_d",
        [](const PyModel& model, double eps, const std::vector<double>& radii) {
            const ConditionDReport r = condition_D_check(*model, eps, default_rays(), radii);
            auto sections = [](const std::vector<SectionGrowth>& list) {
                py::list out;
                for (const SectionGrowth& s : list) {
                    py::dict d;
                    d["side"] = s.side;
                    d["index"] = s.index;
                    d["exponent"] = s.fit.exponent;
                    d["inverse_slope"] = s.inverse_fit.slope;
                    d["growth"] = growth_class_name(s.growth);
                    out.append(d);
                }
                return out;
            };
            py::dict d;
            d["passes"] = r.passes;
            d["E_exponent"] = fit_dict(r.E_exponent);
            d["dual_exponent"] = fit_dict(r.dual_exponent);
            d["sections"] = sections(r.sections);
            d["dual_sections"] = sections(r.dual_sections);
            return d;
        },
        py::arg("model"), py::arg("eps") = 0.5, py::arg("radii") = default_radii());
    m.def(
        "asymptotics_check",
        [](const PyModel& model, const std::vector<int>& charges, const std::vector<double>& radii, int n_samples) {
            const AsymptoticsReport a = asymptotics_check(*model, charges, radii, n_samples, 42);
            py::dict d;
            d["p1_exponent"] = a.p1_exponent;
            d["p2_sup"] = a.p2_sup;
            d["p3_sup"] = a.p3_sup;
            d["grad_rphi_sup"] = a.grad_rphi_sup;
            d["grad_rphi_exponent"] = a.grad_rphi_fit.exponent;
            return d;
        },
        py::arg("model"), py::arg("charges"), py::arg("radii") = default_radii(), py::arg("n_samples") = 64);

    m.def(
        "run",
        [](const std::string& config_text, int jobs, const std::string& format) {
            const auto configs = parse_config_set(config_text);
            std::vector<RunReport> reports;
            {
                py::gil_scoped_release release;
                reports = run_suites(configs, jobs);
            }
            return py::make_tuple(render(reports, format == "json" ? OutputFormat::json : OutputFormat::csv),
                                  exit_status(reports));
        },
        py::arg("config"), py::arg("jobs") = 1, py::arg("format") = "csv",
        "Runs a config or zoo document; returns (report text, exit status)");
    m.def("zoo_document", [] { return zoo_document(); });
}
