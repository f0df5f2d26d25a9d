// Runs the acceptance criteria given on the command line (all by default)
// and prints one PASS/FAIL line per criterion.

#include "monolab/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"monolab acceptance suite"};
    std::vector<int> criteria;
    bool quiet = false;
    app.add_option("criteria", criteria, "Criterion numbers (default: all)")
        ->check(CLI::Range(1, monolab::kCriterionCount));
    app.add_flag("--quiet,-q", quiet, "Only print the PASS/FAIL lines");
    CLI11_PARSE(app, argc, argv);
    return monolab::run_acceptance(criteria, std::cout, !quiet) == 0 ? 0 : 1;
}
