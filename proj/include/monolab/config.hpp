#pragma once

#include "monolab/models.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace monolab {

enum class Suite { verify, pullback, scatter, classify, condition_d, charges, asymptotics, all };

const char* suite_name(Suite s);

enum class OutputFormat { csv, json };

/// One validated run: a model tree, a suite and every numeric knob.
struct RunConfig {
    ModelSpec model;
    Suite suite = Suite::all;
    double ode_tol = 1e-10;
    double fd_step = 1e-4;
    std::vector<double> radii;  // strictly decreasing, in (0, 1)
    int n_sphere = 64;
    double epsilon = 0.5;
    std::uint64_t seed = 42;
    int n_points = 20;  // seeded verification points per model
    int n_args = 8;     // arguments per circle for pole orders
    std::string output;  // empty: standard output
    OutputFormat format = OutputFormat::csv;

    /// JSON of the model tree and all knobs except output and format, with
    /// defaults filled in; the config hash is taken over this text.
    std::string canonical() const;
    /// 16 hex digits of the 64-bit FNV-1a hash of canonical().
    std::string hash() const;
};

std::vector<double> default_radii();

/// Parses one config document. Throws ConfigError naming the line (syntax
/// errors) or the field path (schema errors).
RunConfig parse_config(const std::string& text);

/// Parses either a single config or a zoo document {"configs": [...]}.
std::vector<RunConfig> parse_config_set(const std::string& text);

/// The default model zoo as a zoo document, running `suite`.
std::string zoo_document(Suite suite = Suite::all);

}  // namespace monolab
