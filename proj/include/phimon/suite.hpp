// suite.hpp - CLI front end: run configuration, named check suites,
// machine-readable JSON reports and plot-data emission.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "phimon/core.hpp"
#include "phimon/error_function.hpp"
#include "phimon/inequalities.hpp"
#include "phimon/numerics.hpp"

namespace phimon {

enum class SuiteKind { monotone, holder, feh, hh, ostrowski, converse, all };

SuiteKind parse_suite_name(const std::string& name);
std::string suite_name(SuiteKind kind);

struct RunConfig {
    SuiteKind suite = SuiteKind::all;
    std::string function_spec;  // expression or CSV path; empty = none
    std::string error_spec;     // power:c=..,p=.. | table:<path> | transform:<inner>
    double lo = 0.0;
    double hi = 1.0;
    std::size_t grid_n = 101;
    double tolerance = 1e-9;
    QuadratureSpec quad{};
    std::string output;     // report path; empty writes to stdout
    std::string plots_dir;  // empty disables plot emission
    double x = std::numeric_limits<double>::quiet_NaN();      // window left
    double y = std::numeric_limits<double>::quiet_NaN();      // window right
    double point = std::numeric_limits<double>::quiet_NaN();  // interpolation/ostrowski point
    int iterates = 5;
    double horizon = 10.0;
    int resolution = 201;
    ConverseVariant converse_variant = ConverseVariant::left;
};

struct PlotEntry {
    std::string name;
    RealFunction fn;
    double lo;
    double hi;
};

struct SuiteResult {
    nlohmann::ordered_json report;
    bool all_hold = true;
    std::vector<PlotEntry> plots;
};

/// Builds the named error function from its CLI grammar.
ErrorFunction parse_error_spec(const std::string& spec, const QuadratureSpec& quad);

/// An expression, or a CSV table when the spec names a .csv file.
RealFunction parse_function_spec(const std::string& spec, const Interval& domain);

/// Runs every check of the configured suite; throws ConfigError /
/// HypothesisError / QuadratureError on unusable input.
SuiteResult execute_suite(const RunConfig& config);

/// Full run: executes, writes the report (and plot files when requested) and
/// maps the outcome to an exit status: 0 all verdicts hold, 1 some verdict
/// fails, 2 input or configuration error.
int run_suite(const RunConfig& config);

/// Two-column (x, value) data files, one per plot entry; returns the paths.
std::vector<std::string> emit_plot_data(const SuiteResult& result, const std::string& dir);

/// Deterministic serialization: stable key order and %.17g float formatting,
/// so parsing an emitted report and re-serializing is byte-identical.
std::string dump_report_json(const nlohmann::ordered_json& j);

}  // namespace phimon
