#pragma once

#include "monolab/config.hpp"

#include <functional>
#include <string>
#include <vector>

namespace monolab {

/// One output line. `point` is a radius or a point "t;x;y"; rows sort by
/// (suite, quantity, sort_key) and keep generation order otherwise.
struct ReportRow {
    std::string suite;
    std::string model;
    std::string quantity;
    std::string point;
    double sort_key = 0.0;
    double value = 0.0;
    std::string aux1;
    std::string aux2;
};

/// A suite-internal assertion; also emitted as a row "assert:<name>".
struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RunReport {
    RunConfig config;
    std::string model_label;
    std::vector<ReportRow> rows;
    std::vector<Check> checks;
    std::vector<std::string> errors;  // module errors that aborted part of the run

    bool complete() const { return errors.empty(); }
    int failed_checks() const;
};

/// Exit codes of the command-line driver.
enum ExitStatus : int { kExitPass = 0, kExitAssertion = 1, kExitConfig = 2, kExitNumerical = 3 };

/// 3 if any report is incomplete, else 1 if any check failed, else 0.
int exit_status(const std::vector<RunReport>& reports);

/// Runs each config's suite. Independent pieces of work are spread over
/// `jobs` threads; the result does not depend on `jobs`.
std::vector<RunReport> run_suites(const std::vector<RunConfig>& configs, int jobs = 1);
RunReport run_suite(const RunConfig& config, int jobs = 1);

/// Applies f(i) for i in [0, n) on up to `jobs` threads, results in index order.
/// The first exception (lowest index) is rethrown after all work finished.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f);

/// "%.17g"
std::string format_double(double v);

std::string render_csv(const std::vector<RunReport>& reports);
std::string render_json(const std::vector<RunReport>& reports);
std::string render(const std::vector<RunReport>& reports, OutputFormat format);

}  // namespace monolab
