#include "monolab/config.hpp"

#include "monolab/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace monolab {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

const std::set<std::string> kTopKeys{"model",   "suite", "ode_tol",  "fd_step", "radii",  "n_sphere",
                                     "epsilon", "seed",  "n_points", "n_args",  "output", "format"};

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError(at(path, key), "unknown field");
    }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError(at(path, key), "missing required field");
    return obj.at(key);
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
    return d;
}

double positive(const json& v, const std::string& path) {
    const double d = number(v, path);
    if (!(d > 0.0)) throw ConfigError(path, "must be positive");
    return d;
}

int integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == std::floor(d) && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    throw ConfigError(path, "expected an integer, got " + v.dump());
}

cplx complex_number(const json& v, const std::string& path) {
    if (v.is_number()) return {number(v, path), 0.0};
    if (v.is_array() && v.size() == 2) return {number(v[0], at(path, 0)), number(v[1], at(path, 1))};
    throw ConfigError(path, "expected a real number or a [re, im] pair");
}

ModelSpec parse_model(const json& node, const std::string& path, int depth);

ModelSpec child(const json& node, const std::string& key, const std::string& path, int depth) {
    return parse_model(require(node, key, path), at(path, key), depth + 1);
}

Polynomial parse_polynomial(const json& node, const std::string& path) {
    if (!node.is_object()) throw ConfigError(path, "expected {\"poly\": [[monomial, coefficient], ...]}");
    reject_unknown(node, {"poly"}, path);
    const std::string ppath = at(path, "poly");
    const json& terms = require(node, "poly", path);
    if (!terms.is_array()) throw ConfigError(ppath, "expected a list of [monomial, coefficient] pairs");
    std::vector<Monomial> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const json& term = terms[i];
        const std::string tpath = at(ppath, i);
        if (!term.is_array() || term.size() != 2 || !term[0].is_string()) {
            throw ConfigError(tpath, "expected [monomial, coefficient]");
        }
        const double coef = number(term[1], at(tpath, 1));
        try {
            out.push_back(Polynomial::parse_monomial(term[0].get<std::string>(), coef));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(at(tpath, 0), std::string("malformed polynomial: ") + e.what());
        }
    }
    return Polynomial(std::move(out));
}

GaugeGenerator parse_generator(const json& node, const std::string& path) {
    if (!node.is_object()) throw ConfigError(path, "expected an object");
    reject_unknown(node, {"constant", "diagonal"}, path);
    GaugeGenerator g;
    if (node.contains("constant")) {
        const std::string cpath = at(path, "constant");
        const json& rows = node.at("constant");
        if (!rows.is_array() || rows.empty()) throw ConfigError(cpath, "expected a square matrix (list of rows)");
        const auto n = static_cast<Eigen::Index>(rows.size());
        g.constant = Mat::Zero(n, n);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].is_array() || rows[i].size() != rows.size()) {
                throw ConfigError(at(cpath, i), "expected a row of length " + std::to_string(rows.size()));
            }
            for (std::size_t j = 0; j < rows.size(); ++j) {
                g.constant(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    complex_number(rows[i][j], at(at(cpath, i), j));
            }
        }
    }
    if (node.contains("diagonal")) {
        const std::string dpath = at(path, "diagonal");
        const json& factors = node.at("diagonal");
        if (!factors.is_array()) throw ConfigError(dpath, "expected a list of factors");
        for (std::size_t i = 0; i < factors.size(); ++i) {
            const std::string fpath = at(dpath, i);
            const json& f = factors[i];
            if (!f.is_object()) throw ConfigError(fpath, "expected an object");
            reject_unknown(f, {"w_power", "t_rate", "w_rate", "wbar_rate"}, fpath);
            DiagonalFactor d;
            if (f.contains("w_power")) d.w_power = integer(f.at("w_power"), at(fpath, "w_power"));
            if (f.contains("t_rate")) d.t_rate = number(f.at("t_rate"), at(fpath, "t_rate"));
            if (f.contains("w_rate")) d.w_rate = complex_number(f.at("w_rate"), at(fpath, "w_rate"));
            if (f.contains("wbar_rate")) d.wbar_rate = complex_number(f.at("wbar_rate"), at(fpath, "wbar_rate"));
            g.diagonal.push_back(d);
        }
    }
    return g;
}

ModelSpec parse_model(const json& node, const std::string& path, int depth) {
    if (depth > kMaxSpecDepth) throw ConfigError(path, "model tree deeper than " + std::to_string(kMaxSpecDepth));
    if (!node.is_object()) throw ConfigError(path, "expected a model object");
    const json& type = require(node, "type", path);
    if (!type.is_string()) throw ConfigError(at(path, "type"), "expected a string");
    const std::string kind = type.get<std::string>();
    ModelSpec spec;
    if (kind == "dirac_sum") {
        reject_unknown(node, {"type", "charges"}, path);
        spec.kind = ModelSpec::Kind::DiracSum;
        const json& charges = require(node, "charges", path);
        const std::string cpath = at(path, "charges");
        if (!charges.is_array() || charges.empty()) throw ConfigError(cpath, "expected a non-empty list of integers");
        for (std::size_t i = 0; i < charges.size(); ++i) spec.charges.push_back(integer(charges[i], at(cpath, i)));
    } else if (kind == "counterexample") {
        reject_unknown(node, {"type"}, path);
        spec.kind = ModelSpec::Kind::Counterexample;
    } else if (kind == "direct_sum") {
        reject_unknown(node, {"type", "children"}, path);
        spec.kind = ModelSpec::Kind::DirectSum;
        const json& children = require(node, "children", path);
        const std::string cpath = at(path, "children");
        if (!children.is_array() || children.empty()) throw ConfigError(cpath, "expected a non-empty list of models");
        for (std::size_t i = 0; i < children.size(); ++i) {
            spec.children.push_back(parse_model(children[i], at(cpath, i), depth + 1));
        }
    } else if (kind == "dual") {
        reject_unknown(node, {"type", "base"}, path);
        spec.kind = ModelSpec::Kind::Dual;
        spec.children.push_back(child(node, "base", path, depth));
    } else if (kind == "gauge") {
        reject_unknown(node, {"type", "base", "generator", "mini_holomorphic"}, path);
        spec.kind = ModelSpec::Kind::Gauge;
        spec.children.push_back(child(node, "base", path, depth));
        spec.generator = parse_generator(require(node, "generator", path), at(path, "generator"));
        if (node.contains("mini_holomorphic")) {
            if (!node.at("mini_holomorphic").is_boolean()) {
                throw ConfigError(at(path, "mini_holomorphic"), "expected true or false");
            }
            spec.mini_holomorphic = node.at("mini_holomorphic").get<bool>();
        }
    } else if (kind == "metric_twist") {
        reject_unknown(node, {"type", "base", "f"}, path);
        spec.kind = ModelSpec::Kind::MetricTwist;
        spec.children.push_back(child(node, "base", path, depth));
        spec.twist = parse_polynomial(require(node, "f", path), at(path, "f"));
    } else {
        throw ConfigError(at(path, "type"), "unknown model type '" + kind +
                                                "' (expected dirac_sum, counterexample, direct_sum, dual, gauge, "
                                                "metric_twist)");
    }
    return spec;
}

Suite parse_suite(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    const std::string s = v.get<std::string>();
    for (Suite x : {Suite::verify, Suite::pullback, Suite::scatter, Suite::classify, Suite::condition_d, Suite::charges,
                    Suite::asymptotics, Suite::all}) {
        if (s == suite_name(x)) return x;
    }
    throw ConfigError(path, "unknown suite '" + s + "'");
}

std::vector<double> parse_radii(const json& v, const std::string& path) {
    std::vector<double> radii;
    if (v.is_object()) {
        reject_unknown(v, {"from", "to", "n"}, path);
        const double from = positive(require(v, "from", path), at(path, "from"));
        const double to = positive(require(v, "to", path), at(path, "to"));
        const int n = integer(require(v, "n", path), at(path, "n"));
        if (n < 2) throw ConfigError(at(path, "n"), "need at least two radii");
        const double ratio = std::log(to / from) / (n - 1);
        for (int i = 0; i < n; ++i) radii.push_back(i == n - 1 ? to : from * std::exp(ratio * i));
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) radii.push_back(number(v[i], at(path, i)));
    } else {
        throw ConfigError(path, "expected a list of radii or {from, to, n}");
    }
    if (radii.size() < 4) throw ConfigError(path, "need at least four radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0 && radii[i] < 1.0)) throw ConfigError(at(path, i), "radii must lie in (0, 1)");
        if (i && !(radii[i] < radii[i - 1])) throw ConfigError(at(path, i), "radii must be strictly decreasing");
    }
    return radii;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col),
                          std::string("syntax error: ") + e.what());
    }
}

RunConfig parse_config_object(const json& doc, const std::string& path) {
    if (!doc.is_object()) throw ConfigError(path, "expected a config object");
    reject_unknown(doc, kTopKeys, path);
    RunConfig cfg;
    cfg.model = parse_model(require(doc, "model", path), at(path, "model"), 1);
    cfg.radii = default_radii();
    if (doc.contains("suite")) cfg.suite = parse_suite(doc.at("suite"), at(path, "suite"));
    if (doc.contains("ode_tol")) cfg.ode_tol = positive(doc.at("ode_tol"), at(path, "ode_tol"));
    if (doc.contains("fd_step")) cfg.fd_step = positive(doc.at("fd_step"), at(path, "fd_step"));
    if (doc.contains("radii")) cfg.radii = parse_radii(doc.at("radii"), at(path, "radii"));
    if (doc.contains("n_sphere")) {
        cfg.n_sphere = integer(doc.at("n_sphere"), at(path, "n_sphere"));
        if (cfg.n_sphere < 2) throw ConfigError(at(path, "n_sphere"), "need at least 2 sphere samples");
    }
    if (doc.contains("epsilon")) cfg.epsilon = positive(doc.at("epsilon"), at(path, "epsilon"));
    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            throw ConfigError(at(path, "seed"), "expected a non-negative integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("n_points")) {
        cfg.n_points = integer(doc.at("n_points"), at(path, "n_points"));
        if (cfg.n_points < 1) throw ConfigError(at(path, "n_points"), "must be positive");
    }
    if (doc.contains("n_args")) {
        cfg.n_args = integer(doc.at("n_args"), at(path, "n_args"));
        if (cfg.n_args < 8) throw ConfigError(at(path, "n_args"), "need at least 8 arguments per circle");
    }
    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) throw ConfigError(at(path, "output"), "expected a path string");
        cfg.output = doc.at("output").get<std::string>();
    }
    if (doc.contains("format")) {
        const json& f = doc.at("format");
        if (f == "csv") {
            cfg.format = OutputFormat::csv;
        } else if (f == "json") {
            cfg.format = OutputFormat::json;
        } else {
            throw ConfigError(at(path, "format"), "expected \"csv\" or \"json\"");
        }
    }
    try {
        build_model(cfg.model);
    } catch (const ModelDomainError& e) {
        throw ConfigError(at(path, "model"), e.what());
    }
    return cfg;
}

std::string monomial_text(const Monomial& m) {
    std::string out;
    auto add = [&](const char* v, int n) {
        if (n == 0) return;
        if (!out.empty()) out += "*";
        out += v;
        if (n > 1) out += "^" + std::to_string(n);
    };
    add("t", m.pt);
    add("x", m.px);
    add("y", m.py);
    return out.empty() ? "1" : out;
}

ordered complex_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return ordered::array({z.real(), z.imag()});
}

ordered model_json(const ModelSpec& spec) {
    ordered j;
    switch (spec.kind) {
        case ModelSpec::Kind::DiracSum:
            j["type"] = "dirac_sum";
            j["charges"] = spec.charges;
            break;
        case ModelSpec::Kind::Counterexample: j["type"] = "counterexample"; break;
        case ModelSpec::Kind::DirectSum: {
            j["type"] = "direct_sum";
            ordered kids = ordered::array();
            for (const auto& c : spec.children) kids.push_back(model_json(c));
            j["children"] = kids;
            break;
        }
        case ModelSpec::Kind::Dual:
            j["type"] = "dual";
            j["base"] = model_json(spec.children.front());
            break;
        case ModelSpec::Kind::Gauge: {
            j["type"] = "gauge";
            j["base"] = model_json(spec.children.front());
            ordered g = ordered::object();
            if (spec.generator.constant.size()) {
                ordered rows = ordered::array();
                for (Eigen::Index i = 0; i < spec.generator.constant.rows(); ++i) {
                    ordered row = ordered::array();
                    for (Eigen::Index k = 0; k < spec.generator.constant.cols(); ++k) {
                        row.push_back(complex_json(spec.generator.constant(i, k)));
                    }
                    rows.push_back(row);
                }
                g["constant"] = rows;
            }
            if (!spec.generator.diagonal.empty()) {
                ordered ds = ordered::array();
                for (const auto& d : spec.generator.diagonal) {
                    ds.push_back(ordered{{"w_power", d.w_power},
                                         {"t_rate", d.t_rate},
                                         {"w_rate", complex_json(d.w_rate)},
                                         {"wbar_rate", complex_json(d.wbar_rate)}});
                }
                g["diagonal"] = ds;
            }
            j["generator"] = g;
            j["mini_holomorphic"] = spec.mini_holomorphic;
            break;
        }
        case ModelSpec::Kind::MetricTwist: {
            j["type"] = "metric_twist";
            j["base"] = model_json(spec.children.front());
            ordered terms = ordered::array();
            for (const auto& m : spec.twist.terms()) terms.push_back(ordered::array({monomial_text(m), m.coef}));
            j["f"] = ordered{{"poly", terms}};
            break;
        }
    }
    return j;
}

ordered config_json(const RunConfig& cfg, bool with_io) {
    ordered j;
    j["model"] = model_json(cfg.model);
    j["suite"] = suite_name(cfg.suite);
    j["ode_tol"] = cfg.ode_tol;
    j["fd_step"] = cfg.fd_step;
    j["radii"] = cfg.radii;
    j["n_sphere"] = cfg.n_sphere;
    j["epsilon"] = cfg.epsilon;
    j["seed"] = cfg.seed;
    j["n_points"] = cfg.n_points;
    j["n_args"] = cfg.n_args;
    if (with_io) {
        if (!cfg.output.empty()) j["output"] = cfg.output;
        j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    }
    return j;
}

}  // namespace

const char* suite_name(Suite s) {
    switch (s) {
        case Suite::verify: return "verify";
        case Suite::pullback: return "pullback";
        case Suite::scatter: return "scatter";
        case Suite::classify: return "classify";
        case Suite::condition_d: return "condition_d";
        case Suite::charges: return "charges";
        case Suite::asymptotics: return "asymptotics";
        case Suite::all: return "all";
    }
    return "?";
}

std::vector<double> default_radii() {
    std::vector<double> r;
    const int n = 12;
    const double ratio = std::log(0.005 / 0.5) / (n - 1);
    for (int i = 0; i < n; ++i) r.push_back(i == n - 1 ? 0.005 : 0.5 * std::exp(ratio * i));
    return r;
}

std::string RunConfig::canonical() const { return config_json(*this, false).dump(); }

std::string RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const std::string& text) { return parse_config_object(parse_text(text), ""); }

std::vector<RunConfig> parse_config_set(const std::string& text) {
    const json doc = parse_text(text);
    if (doc.is_object() && doc.contains("configs")) {
        reject_unknown(doc, {"configs"}, "");
        const json& list = doc.at("configs");
        if (!list.is_array() || list.empty()) throw ConfigError("configs", "expected a non-empty list of configs");
        std::vector<RunConfig> out;
        for (std::size_t i = 0; i < list.size(); ++i) out.push_back(parse_config_object(list[i], at("configs", i)));
        return out;
    }
    return {parse_config_object(doc, "")};
}

std::string zoo_document(Suite suite) {
    auto dirac = [](std::vector<int> charges) {
        ModelSpec s;
        s.kind = ModelSpec::Kind::DiracSum;
        s.charges = std::move(charges);
        return s;
    };
    std::vector<RunConfig> zoo;
    auto add = [&](ModelSpec spec) {
        RunConfig cfg;
        cfg.model = std::move(spec);
        cfg.suite = suite;
        cfg.radii = default_radii();
        zoo.push_back(std::move(cfg));
        return &zoo.back();
    };
    add(dirac({0}));
    add(dirac({1}));
    add(dirac({3}));
    add(dirac({2, -1}));
    {
        ModelSpec ce;
        ce.kind = ModelSpec::Kind::Counterexample;
        add(ce);
    }
    {
        ModelSpec tw;
        tw.kind = ModelSpec::Kind::MetricTwist;
        tw.children.push_back(dirac({1}));
        tw.twist = Polynomial({Polynomial::parse_monomial("t", 1.0)});
        // The bounded twist term dominates |phi| until R is well below 0.1.
        RunConfig* cfg = add(tw);
        cfg->radii.clear();
        const double ratio = std::log(0.0005 / 0.05) / 11;
        for (int i = 0; i < 12; ++i) cfg->radii.push_back(i == 11 ? 0.0005 : 0.05 * std::exp(ratio * i));
    }
    {
        ModelSpec g;
        g.kind = ModelSpec::Kind::Gauge;
        g.children.push_back(dirac({2, -1}));
        const double c = std::cos(0.6), s = std::sin(0.6);
        const cplx ph = std::polar(1.0, 0.9);
        g.generator.constant = Mat(2, 2);
        g.generator.constant << c, -s * std::conj(ph), s * ph, c;
        g.mini_holomorphic = true;
        add(g);
    }
    ordered doc;
    ordered list = ordered::array();
    for (const auto& cfg : zoo) list.push_back(config_json(cfg, true));
    doc["configs"] = list;
    return doc.dump(2) + "\n";
}

}  // namespace monolab
