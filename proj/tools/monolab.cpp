// Batch driver: runs analysis suites from a config file and writes
// deterministic CSV/JSON reports.
//
//   monolab run <config> [--output FILE] [--format csv|json] [--seed N] [--jobs N]
//   monolab zoo [--output FILE]
//   monolab selftest [criteria...]

#include "monolab/acceptance.hpp"
#include "monolab/config.hpp"
#include "monolab/errors.hpp"
#include "monolab/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace {

using namespace monolab;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path, "cannot open output file");
    out << text;
    if (!out) throw ConfigError(path, "write failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"monolab: numerical checks for singular monopoles on R x C"};
    app.require_subcommand(1);

    std::string config_path, output;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};

    auto* run = app.add_subcommand("run", "Run the suite(s) of a config or zoo document");
    run->add_option("config", config_path, "Config file (JSON)")->required();
    run->add_option("--output,-o", output, "Report file (default: standard output)");
    run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--seed", seed, "Override the seed of every config");
    run->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* zoo = app.add_subcommand("zoo", "Emit the default model zoo as a config document");
    std::string zoo_suite = "all";
    zoo->add_option("--output,-o", output, "Destination (default: standard output)");
    zoo->add_option("--suite", zoo_suite, "Suite for every zoo entry")
        ->check(CLI::IsMember({"verify", "pullback", "scatter", "classify", "condition_d", "charges", "asymptotics",
                               "all"}));

    auto* selftest = app.add_subcommand("selftest", "Run the acceptance criteria");
    std::vector<int> criteria;
    selftest->add_option("criteria", criteria, "Criterion numbers (default: all)")
        ->check(CLI::Range(1, kCriterionCount));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (*run) {
            std::vector<RunConfig> configs = parse_config_set(read_file(config_path));
            for (RunConfig& c : configs) {
                if (seed) c.seed = *seed;
                if (format) c.format = formats.at(*format);
                if (!output.empty()) c.output = output;
            }
            const std::vector<RunReport> reports = run_suites(configs, jobs);
            // All reports go to one destination in one format: the first
            // config's unless overridden on the command line.
            write_output(configs.front().output, render(reports, configs.front().format));
            for (const RunReport& r : reports) {
                for (const std::string& e : r.errors) std::cerr << "error: " << r.model_label << ": " << e << "\n";
                for (const Check& c : r.checks) {
                    if (!c.passed) std::cerr << "check failed: " << r.model_label << ": " << c.name << " " << c.detail << "\n";
                }
            }
            return exit_status(reports);
        }
        if (*zoo) {
            Suite s = Suite::all;
            for (Suite cand : {Suite::verify, Suite::pullback, Suite::scatter, Suite::classify, Suite::condition_d,
                               Suite::charges, Suite::asymptotics, Suite::all}) {
                if (zoo_suite == suite_name(cand)) s = cand;
            }
            write_output(output, zoo_document(s));
            return kExitPass;
        }
        if (*selftest) {
            return run_acceptance(criteria, std::cout) == 0 ? kExitPass : kExitAssertion;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitPass;
}
