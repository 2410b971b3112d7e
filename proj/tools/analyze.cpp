// analyze - run named verification suites over a function / error-function
// pair and emit a JSON report plus optional plot data.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "phimon/suite.hpp"

namespace {

bool parse_interval(const std::string& text, double& lo, double& hi) {
    std::size_t comma = text.find(',');
    if (comma == std::string::npos) return false;
    try {
        lo = std::stod(text.substr(0, comma));
        hi = std::stod(text.substr(comma + 1));
    } catch (...) {
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification suites for approximately monotone and Hoelder-type "
                 "functions: pointwise checks, interpolation criteria, the two-point "
                 "min/max functional equations, Hermite-Hadamard and Ostrowski bounds "
                 "with sharpness certificates, and converse premise checks."};
    app.name("analyze");

    std::string suite;
    std::string function_spec;
    std::string error_spec;
    std::string interval_text;
    std::string variant = "left";
    std::string quad_rule = "simpson";
    phimon::RunConfig config;

    app.add_option("--suite", suite,
                   "check suite: monotone|holder|feh|hh|ostrowski|converse|all")
        ->required();
    app.add_option("--function", function_spec, "expression in x (or t), or a CSV path");
    app.add_option("--error", error_spec,
                   "error function: power:c=<r>,p=<r> | table:<path.csv> | "
                   "transform:<inner-spec>");
    app.add_option("--interval", interval_text, "open domain as lo,hi")->required();
    app.add_option("--grid-n", config.grid_n, "number of grid points (default 101)");
    app.add_option("--tol", config.tolerance, "additive check tolerance (default 1e-9)");
    app.add_option("--quad-tol", config.quad.tolerance,
                   "quadrature refinement tolerance (default 1e-8)");
    app.add_option("--quad-rule", quad_rule, "simpson|trapezoid (default simpson)");
    app.add_option("--out", config.output, "report path (default: stdout)");
    app.add_option("--plots", config.plots_dir, "directory for plot-data files");
    app.add_option("--x", config.x, "window left endpoint (default: first grid point)");
    app.add_option("--y", config.y, "window right endpoint (default: last grid point)");
    app.add_option("--point", config.point,
                   "interpolation / Ostrowski point (default: window midpoint)");
    app.add_option("--iterates", config.iterates, "operator iterations (default 5)");
    app.add_option("--horizon", config.horizon,
                   "truncation horizon for unbounded intervals (default 10)");
    app.add_option("--resolution", config.resolution,
                   "extremum scan resolution (default 201)");
    app.add_option("--variant", variant,
                   "converse variant: left|right|holder_left|holder_right");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.get_name() << ": " << e.what() << '\n';
        return 2;
    }

    try {
        config.suite = phimon::parse_suite_name(suite);
        config.function_spec = function_spec;
        config.error_spec = error_spec;
        if (!parse_interval(interval_text, config.lo, config.hi)) {
            std::cerr << "error: --interval expects lo,hi\n";
            return 2;
        }
        if (quad_rule == "simpson") {
            config.quad.rule = phimon::QuadratureSpec::Rule::composite_simpson;
        } else if (quad_rule == "trapezoid") {
            config.quad.rule = phimon::QuadratureSpec::Rule::composite_trapezoid;
        } else {
            std::cerr << "error: unknown quadrature rule '" << quad_rule << "'\n";
            return 2;
        }
        if (variant == "left") {
            config.converse_variant = phimon::ConverseVariant::left;
        } else if (variant == "right") {
            config.converse_variant = phimon::ConverseVariant::right;
        } else if (variant == "holder_left") {
            config.converse_variant = phimon::ConverseVariant::holder_left;
        } else if (variant == "holder_right") {
            config.converse_variant = phimon::ConverseVariant::holder_right;
        } else {
            std::cerr << "error: unknown converse variant '" << variant << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    return phimon::run_suite(config);
}
