#include "monolab/config.hpp"
#include "monolab/errors.hpp"
#include "monolab/report.hpp"

#include <catch_amalgamated.hpp>

#include <atomic>
#include <json.hpp>

using namespace monolab;
using Catch::Approx;

namespace {

std::string where_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.where();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
    const RunConfig c = parse_config(R"({"model": {"type": "dirac_sum", "charges": [2, -1]}, "suite": "classify"})");
    CHECK(c.suite == Suite::classify);
    CHECK(c.model.charges == std::vector<int>{2, -1});
    CHECK(c.ode_tol == 1e-10);
    CHECK(c.fd_step == 1e-4);
    CHECK(c.n_sphere == 64);
    CHECK(c.epsilon == 0.5);
    CHECK(c.seed == 42);
    REQUIRE(c.radii.size() == 12);
    CHECK(c.radii.front() == Approx(0.5));
    CHECK(c.radii.back() == Approx(0.005));
}

TEST_CASE("overrides and nesting") {
    const RunConfig c = parse_config(R"({"model": {"type": "counterexample"}, "suite": "condition_d", "epsilon": 0.25})");
    CHECK(c.epsilon == 0.25);
    CHECK(c.model.kind == ModelSpec::Kind::Counterexample);

    const RunConfig t = parse_config(R"({
        // comments are allowed
        "model": {"type": "metric_twist", "base": {"type": "dirac_sum", "charges": [1]},
                  "f": {"poly": [["t", 1.0]]}},
        "suite": "asymptotics",
        "radii": {"from": 0.05, "to": 0.0005, "n": 8}})");
    CHECK(t.model.kind == ModelSpec::Kind::MetricTwist);
    REQUIRE(t.model.children.size() == 1);
    CHECK(t.model.children[0].charges == std::vector<int>{1});
    CHECK(t.radii.size() == 8);
}

TEST_CASE("config errors name the offending field or line") {
    CHECK(where_of(R"({"model": {"type": "nope"}})") == "model.type");
    CHECK(where_of(R"({"model": {"type": "dirac_sum", "charges": [1.5]}})") == "model.charges[0]");
    CHECK(where_of(R"({"model": {"type": "direct_sum", "children": [{"type": "dirac_sum", "charges": [1]},
                       {"type": "dirac_sum", "charges": ["x"]}]}})") == "model.children[1].charges[0]");
    CHECK(where_of(R"({"model": {"type": "metric_twist", "base": {"type": "dirac_sum", "charges": [1]},
                       "f": {"poly": [["z^2", 1.0]]}}})")
              .starts_with("model.f.poly[0]"));
    CHECK(where_of(R"({"model": {"type": "counterexample"}, "colour": 1})") == "colour");
    CHECK(where_of(R"({"model": {"type": "counterexample"}, "radii": [0.1, 0.2, 0.01, 0.001]})") == "radii[1]");
    CHECK(where_of(R"({"model": {"type": "counterexample"}, "fd_step": -1})") == "fd_step");
    CHECK(where_of("{\n  \"model\": {\"type\": \"counterexample\"},\n  \"suite\": \n}").starts_with("line 4"));
}

TEST_CASE("config hash covers the numeric knobs only") {
    RunConfig a = parse_config(R"({"model": {"type": "counterexample"}})");
    RunConfig b = a;
    b.output = "elsewhere.csv";
    b.format = OutputFormat::json;
    CHECK(a.hash() == b.hash());
    b.seed = 43;
    CHECK(a.hash() != b.hash());
    CHECK(a.hash().size() == 16);
    CHECK(parse_config(a.canonical()).hash() == a.hash());
}

TEST_CASE("the zoo document lists the default models") {
    const auto zoo = parse_config_set(zoo_document(Suite::classify));
    REQUIRE(zoo.size() == 7);
    for (const auto& c : zoo) CHECK(c.suite == Suite::classify);
}

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    try {
        parallel_for(10, 3, [](std::size_t i) {
            if (i == 3 || i == 7) throw std::runtime_error("boom " + std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "boom 3");
    }
}

TEST_CASE("float formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("classify suite report") {
    RunConfig c = parse_config(R"({"model": {"type": "dirac_sum", "charges": [3]}, "suite": "classify"})");
    const RunReport r = run_suite(c);
    CHECK(r.complete());
    CHECK(r.failed_checks() == 0);
    bool found = false;
    for (const ReportRow& row : r.rows) {
        if (row.quantity == "verdict") {
            CHECK(row.aux1 == "dirac");
            found = true;
        }
        if (row.quantity == "phi_exponent") CHECK(row.value == Approx(-1.0).margin(1e-6));
    }
    CHECK(found);
    CHECK(exit_status({r}) == kExitPass);

    const std::string csv = render_csv({r});
    CHECK(csv.find("suite,model,quantity,R_or_point,value,aux1,aux2,config_hash\n") != std::string::npos);
    CHECK(csv.find("# [0] config_hash=" + c.hash()) != std::string::npos);
    for (const char* key : {"ode_tol=", "fd_step=", "radii=", "n_sphere=", "epsilon=", "seed="}) {
        CHECK(csv.find(key) != std::string::npos);
    }
    const auto j = nlohmann::json::parse(render_json({r}));
    CHECK(j.is_object());
}

TEST_CASE("verify suite on the counterexample") {
    RunConfig c = parse_config(R"({"model": {"type": "counterexample"}, "suite": "verify", "n_points": 5})");
    const RunReport r = run_suite(c, 2);
    CHECK(r.complete());
    CHECK(run_suite(c, 1).rows.size() == r.rows.size());
    CHECK(render_csv({run_suite(c, 1)}) == render_csv({r}));
}

TEST_CASE("module errors produce incomplete reports") {
    // Radii beyond epsilon make the condition (D) flow start inside the ball.
    RunConfig c = parse_config(R"({"model": {"type": "counterexample"}, "suite": "condition_d", "epsilon": 0.1})");
    const RunReport r = run_suite(c);
    CHECK_FALSE(r.complete());
    CHECK(exit_status({r}) == kExitNumerical);
}
