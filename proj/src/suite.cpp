#include "phimon/suite.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace phimon {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// ------------------------------------------------------------------ parsing

SuiteKind parse_suite_name(const std::string& name) {
    if (name == "monotone") return SuiteKind::monotone;
    if (name == "holder") return SuiteKind::holder;
    if (name == "feh") return SuiteKind::feh;
    if (name == "hh") return SuiteKind::hh;
    if (name == "ostrowski") return SuiteKind::ostrowski;
    if (name == "converse") return SuiteKind::converse;
    if (name == "all") return SuiteKind::all;
    throw ConfigError("unknown suite '" + name + "'");
}

std::string suite_name(SuiteKind kind) {
    switch (kind) {
        case SuiteKind::monotone: return "monotone";
        case SuiteKind::holder: return "holder";
        case SuiteKind::feh: return "feh";
        case SuiteKind::hh: return "hh";
        case SuiteKind::ostrowski: return "ostrowski";
        case SuiteKind::converse: return "converse";
        case SuiteKind::all: return "all";
    }
    throw ConfigError("corrupt suite kind");
}

namespace {

double parse_double_field(const std::string& text, const std::string& what) {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError("invalid number '" + text + "' in " + what);
    }
    return v;
}

}  // namespace

ErrorFunction parse_error_spec(const std::string& spec, const QuadratureSpec& quad) {
    if (spec.rfind("power:", 0) == 0) {
        std::string args = spec.substr(6);
        std::optional<double> c, p;
        std::size_t pos = 0;
        while (pos < args.size()) {
            std::size_t comma = args.find(',', pos);
            std::string field = args.substr(pos, comma == std::string::npos ? comma
                                                                            : comma - pos);
            std::size_t eq = field.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("expected key=value in error spec '" + spec + "'");
            }
            std::string key = field.substr(0, eq);
            double value = parse_double_field(field.substr(eq + 1), "error spec");
            if (key == "c")
                c = value;
            else if (key == "p")
                p = value;
            else
                throw ConfigError("unknown key '" + key + "' in error spec '" + spec + "'");
            pos = comma == std::string::npos ? args.size() : comma + 1;
        }
        if (!c || !p) throw ConfigError("power error spec needs both c= and p=");
        return ErrorFunction::power(*c, *p);
    }
    if (spec.rfind("table:", 0) == 0) {
        std::string path = spec.substr(6);
        SampledCsv csv = load_sampled_csv(path);
        if (csv.xs.front() < 0.0) {
            throw ConfigError("error-function table needs x values >= 0: " + path);
        }
        double x_max = csv.xs.back();
        RealFunction fn =
            RealFunction::from_table(csv.xs, csv.ys, InterpRule::linear,
                                     Interval(-1.0 - x_max,
                                              std::numeric_limits<double>::infinity()));
        return ErrorFunction::tabulated(std::move(fn));
    }
    if (spec.rfind("transform:", 0) == 0) {
        ErrorFunction inner = parse_error_spec(spec.substr(10), quad);
        return transform_psi_to_phi(inner, quad);
    }
    throw ConfigError("unknown error-function spec '" + spec + "'");
}

RealFunction parse_function_spec(const std::string& spec, const Interval& domain) {
    if (spec.size() >= 4 && spec.substr(spec.size() - 4) == ".csv") {
        SampledCsv csv = load_sampled_csv(spec);
        return RealFunction::from_table(csv.xs, csv.ys, InterpRule::linear, domain);
    }
    try {
        return RealFunction::from_expression(spec, domain);
    } catch (const ParseError& e) {
        throw ConfigError("cannot parse function '" + spec + "': " + e.what());
    }
}

// --------------------------------------------------------------- reporting

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void dump_string(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void dump_value(const ordered_json& j, std::string& out) {
    switch (j.type()) {
        case nlohmann::detail::value_t::null:
            out += "null";
            break;
        case nlohmann::detail::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case nlohmann::detail::value_t::string:
            dump_string(j.get<std::string>(), out);
            break;
        case nlohmann::detail::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case nlohmann::detail::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case nlohmann::detail::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        case nlohmann::detail::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                dump_string(it.key(), out);
                out += ':';
                dump_value(it.value(), out);
            }
            out += '}';
            break;
        }
        case nlohmann::detail::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump_value(v, out);
            }
            out += ']';
            break;
        }
        default:
            out += "null";
    }
}

ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    if (v == 0.0) v = 0.0;
    return v;
}

std::string rule_name(QuadratureSpec::Rule rule) {
    return rule == QuadratureSpec::Rule::composite_simpson ? "composite-simpson"
                                                           : "composite-trapezoid";
}

std::string variant_name(ConverseVariant v) {
    switch (v) {
        case ConverseVariant::left: return "left";
        case ConverseVariant::right: return "right";
        case ConverseVariant::holder_left: return "holder_left";
        case ConverseVariant::holder_right: return "holder_right";
    }
    throw ConfigError("corrupt converse variant");
}

std::string certificate_kind_name(BoundCertificate::Kind kind) {
    switch (kind) {
        case BoundCertificate::Kind::hh_lower: return "hh_lower";
        case BoundCertificate::Kind::hh_upper: return "hh_upper";
        case BoundCertificate::Kind::ostrowski: return "ostrowski";
        case BoundCertificate::Kind::ghh: return "ghh";
        case BoundCertificate::Kind::ghh_holder: return "ghh_holder";
    }
    throw ConfigError("corrupt certificate kind");
}

struct CheckRow {
    std::string id;
    std::string ref;
    CheckReport report;
};

struct CertRow {
    std::string id;
    std::string ref;
    BoundCertificate cert;
};

}  // namespace

std::string dump_report_json(const ordered_json& j) {
    std::string out;
    dump_value(j, out);
    return out;
}

// ---------------------------------------------------------------- execution

SuiteResult execute_suite(const RunConfig& config) {
    Interval interval = [&] {
        try {
            return Interval(config.lo, config.hi);
        } catch (const Error& e) {
            throw ConfigError(std::string("bad interval: ") + e.what());
        }
    }();
    if (config.grid_n < 2) throw ConfigError("grid_n must be at least 2");
    if (!(config.tolerance > 0.0)) throw ConfigError("tolerance must be positive");

    double margin = (interval.finite() ? interval.length()
                                       : config.horizon - interval.lo()) /
                    1000.0;
    Grid grid = make_grid(interval, config.grid_n, margin, config.horizon);

    std::optional<RealFunction> f;
    if (!config.function_spec.empty()) {
        f = parse_function_spec(config.function_spec, interval);
    }
    std::optional<ErrorFunction> phi;
    if (!config.error_spec.empty()) {
        phi = parse_error_spec(config.error_spec, config.quad);
    }

    auto need_function = [&]() -> const RealFunction& {
        if (!f) throw ConfigError("this suite needs --function");
        return *f;
    };
    auto need_error = [&]() -> const ErrorFunction& {
        if (!phi) throw ConfigError("this suite needs --error");
        return *phi;
    };

    double window_x = std::isnan(config.x) ? grid.front() : config.x;
    double window_y = std::isnan(config.y) ? grid.back() : config.y;
    if (!(window_x < window_y) || !interval.contains(window_x) ||
        !interval.contains(window_y)) {
        throw ConfigError("window needs x < y strictly inside the interval");
    }
    double interp_point = grid.nearest_point(
        std::isnan(config.point) ? grid.points()[grid.size() / 2] : config.point);
    double ostrowski_point =
        std::isnan(config.point) ? (window_x + window_y) / 2.0 : config.point;

    double cert_tol = std::max(config.tolerance, 10.0 * config.quad.tolerance);
    double tol = config.tolerance;

    std::vector<CheckRow> checks;
    std::vector<CertRow> certs;
    std::vector<PlotEntry> plots;

    auto add_plot = [&](const std::string& name, const RealFunction& fn, double lo,
                        double hi) { plots.push_back(PlotEntry{name, fn, lo, hi}); };

    auto run_monotone = [&] {
        const RealFunction& fn = need_function();
        const ErrorFunction& err = need_error();
        checks.push_back({"phi_monotone", "Eq. H1", check_phi_monotone(fn, err, grid, tol)});
        checks.push_back({"interpolate_monotone_below", "Eq. cond",
                          can_interpolate_monotone(fn, interp_point, InterpolationSide::below,
                                                   err, grid, tol, config.resolution)});
        checks.push_back({"interpolate_monotone_above", "Eq. cond2",
                          can_interpolate_monotone(fn, interp_point, InterpolationSide::above,
                                                   err, grid, tol, config.resolution)});
        TwoPointFunction H = build_two_point(fn, config.resolution);
        RealFunction h = H.section(interp_point);
        BlockScreen screen{std::min<std::size_t>(grid.size(), 101), tol};
        add_plot("f", fn, grid.front(), grid.back());
        add_plot("h_p", build_lower_block(h, interp_point, err, screen), grid.front(),
                 grid.back());
        add_plot("h_sup_p", build_upper_block(h, interp_point, err, screen), grid.front(),
                 grid.back());
    };

    auto run_holder = [&] {
        const RealFunction& fn = need_function();
        const ErrorFunction& err = need_error();
        checks.push_back({"phi_holder", "Eq. H2", check_phi_holder(fn, err, grid, tol)});
        checks.push_back({"interpolate_holder_below", "Eq. condH",
                          can_interpolate_holder(fn, interp_point, InterpolationSide::below,
                                                 err, grid, tol)});
        checks.push_back({"interpolate_holder_above", "Eq. cond2H",
                          can_interpolate_holder(fn, interp_point, InterpolationSide::above,
                                                 err, grid, tol)});
        add_plot("f", fn, grid.front(), grid.back());
        add_plot("holder_lower",
                 build_holder_interpolant(fn, interp_point, InterpolationSide::below, err),
                 grid.front(), grid.back());
        add_plot("holder_upper",
                 build_holder_interpolant(fn, interp_point, InterpolationSide::above, err),
                 grid.front(), grid.back());
    };

    auto run_feh = [&] {
        const RealFunction& fn = need_function();
        TwoPointFunction H = build_two_point(fn, config.resolution);
        H.precompute(grid);
        checks.push_back({"feh_equations", "Eq. FEH", check_feh_equations(H, grid, tol)});
        checks.push_back({"diagonal_bounds", "Eq. H=",
                          check_diagonal_bounds(H, grid, /*continuous_diagonal=*/false, tol)});
        checks.push_back(
            {"feg_equations", "Eq. FEG",
             check_feg_equations([&H](double a, double b) { return -H.h_at(a, b); }, grid,
                                 tol)});
        add_plot("f", fn, grid.front(), grid.back());
    };

    auto run_hh = [&] {
        const ErrorFunction& err = need_error();
        if (f) {
            HhSlacks slacks = hh_bounds(*f, err, window_x, window_y, config.quad, tol);
            CheckAccumulator acc(tol);
            acc.add(window_x, window_y, std::min(slacks.lower, slacks.upper));
            checks.push_back({"hh_bounds", "Eq. HH", acc.finish()});
            add_plot("f", *f, window_x, window_y);
        }
        auto [lower, upper] = hh_sharpness(err, window_x, window_y, config.quad, cert_tol);
        add_plot("f_lower_extremal", *lower.witness_function, window_x, window_y);
        add_plot("f_upper_extremal", *upper.witness_function, window_x, window_y);
        certs.push_back({"hh_lower_sharpness", "Eq. HH1", std::move(lower)});
        certs.push_back({"hh_upper_sharpness", "Eq. HH1", std::move(upper)});
    };

    auto run_ostrowski = [&] {
        const ErrorFunction& err = need_error();
        if (f) {
            checks.push_back({"ostrowski_bound", "Thm. OI",
                              ostrowski_bound(*f, err, window_x, window_y, ostrowski_point,
                                              config.quad, tol)});
            add_plot("f", *f, window_x, window_y);
        }
        BoundCertificate cert = ostrowski_sharpness(err, window_x, window_y, ostrowski_point,
                                                    config.quad, cert_tol);
        add_plot("phi_p", *cert.witness_function, window_x, window_y);
        certs.push_back({"ostrowski_sharpness", "Eq. OI1", std::move(cert)});
    };

    auto run_converse = [&] {
        const RealFunction& fn = need_function();
        const ErrorFunction& err = need_error();
        ConverseVariant variant = config.converse_variant;
        const char* premise_ref = variant == ConverseVariant::left          ? "Eq. HHL"
                                  : variant == ConverseVariant::right       ? "Eq. HHR"
                                  : variant == ConverseVariant::holder_left ? "Eq. HHHL"
                                                                            : "Thm. HHHRI";
        const char* conclusion_ref = variant == ConverseVariant::left          ? "Thm. HHLI"
                                     : variant == ConverseVariant::right       ? "Thm. HHRI"
                                     : variant == ConverseVariant::holder_left ? "Thm. HHHLI"
                                                                               : "Thm. HHHRI";
        CheckReport premise = check_converse_premise(fn, err, variant, grid, config.quad, tol);
        bool premise_holds = premise.holds();
        checks.push_back({"converse_premise", premise_ref, std::move(premise)});
        add_plot("f", fn, grid.front(), grid.back());
        if (!premise_holds) return;  // conclusion is only claimed under the premise
        checks.push_back({"converse_conclusion", conclusion_ref,
                          check_converse_conclusion(fn, err, variant, grid, config.quad,
                                                    tol)});
        std::vector<RealFunction> iterates = iterate_T(fn, err, window_x, window_y,
                                                       config.iterates, config.quad);
        CheckAccumulator t_acc(std::max(tol, 1e-6));
        int samples = 257;
        for (std::size_t k = 0; k + 1 < iterates.size(); ++k) {
            for (int j = 0; j < samples; ++j) {
                double u = window_x + (window_y - window_x) * static_cast<double>(j) /
                                          static_cast<double>(samples - 1);
                t_acc.add(u, static_cast<double>(k + 1),
                          iterates[k + 1](u) - iterates[k](u));
            }
        }
        checks.push_back({"t_iterates_monotone", "Thm. HHLI", t_acc.finish()});
        for (std::size_t k = 0; k < iterates.size(); ++k) {
            add_plot("T" + std::to_string(k + 1), iterates[k], window_x, window_y);
        }
    };

    switch (config.suite) {
        case SuiteKind::monotone: run_monotone(); break;
        case SuiteKind::holder: run_holder(); break;
        case SuiteKind::feh: run_feh(); break;
        case SuiteKind::hh: run_hh(); break;
        case SuiteKind::ostrowski: run_ostrowski(); break;
        case SuiteKind::converse: run_converse(); break;
        case SuiteKind::all:
            run_monotone();
            run_holder();
            run_feh();
            run_hh();
            run_ostrowski();
            run_converse();
            break;
    }

    // deterministic report regardless of evaluation order
    std::sort(checks.begin(), checks.end(),
              [](const CheckRow& a, const CheckRow& b) { return a.id < b.id; });
    std::sort(certs.begin(), certs.end(),
              [](const CertRow& a, const CertRow& b) { return a.id < b.id; });

    ordered_json report;
    ordered_json cfg;
    cfg["suite"] = suite_name(config.suite);
    cfg["function"] = config.function_spec;
    cfg["error"] = config.error_spec;
    cfg["interval"] = ordered_json::array({json_number(config.lo), json_number(config.hi)});
    cfg["grid_n"] = static_cast<std::uint64_t>(config.grid_n);
    cfg["grid_margin"] = json_number(margin);
    cfg["tolerance"] = json_number(config.tolerance);
    ordered_json quad;
    quad["rule"] = rule_name(config.quad.rule);
    quad["initial_subdivisions"] = static_cast<std::int64_t>(config.quad.initial_subdivisions);
    quad["tolerance"] = json_number(config.quad.tolerance);
    quad["max_refinements"] = static_cast<std::int64_t>(config.quad.max_refinements);
    cfg["quad"] = quad;
    cfg["x"] = std::isnan(config.x) ? ordered_json(nullptr) : json_number(config.x);
    cfg["y"] = std::isnan(config.y) ? ordered_json(nullptr) : json_number(config.y);
    cfg["point"] = std::isnan(config.point) ? ordered_json(nullptr) : json_number(config.point);
    cfg["iterates"] = static_cast<std::int64_t>(config.iterates);
    cfg["horizon"] = json_number(config.horizon);
    cfg["resolution"] = static_cast<std::int64_t>(config.resolution);
    cfg["variant"] = variant_name(config.converse_variant);
    cfg["output"] = config.output;
    cfg["plots"] = config.plots_dir;
    report["config"] = cfg;

    bool all_hold = true;
    ordered_json checks_json = ordered_json::array();
    for (const CheckRow& row : checks) {
        ordered_json c;
        c["id"] = row.id;
        c["paper_ref"] = row.ref;
        c["verdict"] = row.report.holds() ? "holds" : "fails";
        c["worst_margin"] = json_number(row.report.worst_margin);
        if (row.report.witness) {
            ordered_json w;
            w["x"] = json_number(row.report.witness->x);
            w["y"] = json_number(row.report.witness->y);
            w["slack"] = json_number(row.report.witness->slack);
            c["witness"] = w;
        }
        ordered_json details;
        details["pairs_checked"] = static_cast<std::uint64_t>(row.report.pairs_checked);
        details["tolerance"] = json_number(row.report.tolerance);
        details["grid_n"] = static_cast<std::uint64_t>(config.grid_n);
        details["quad_rule"] = rule_name(config.quad.rule);
        details["quad_tolerance"] = json_number(config.quad.tolerance);
        c["details"] = details;
        checks_json.push_back(c);
        all_hold = all_hold && row.report.holds();
    }
    report["checks"] = checks_json;

    ordered_json certs_json = ordered_json::array();
    for (const CertRow& row : certs) {
        ordered_json c;
        c["id"] = row.id;
        c["kind"] = certificate_kind_name(row.cert.kind);
        c["paper_ref"] = row.ref;
        c["bound_value"] = json_number(row.cert.bound_value);
        c["achieved_value"] = json_number(row.cert.achieved_value);
        c["gap"] = json_number(row.cert.gap);
        c["tolerance"] = json_number(row.cert.tolerance);
        c["sharp"] = row.cert.sharp();
        certs_json.push_back(c);
        all_hold = all_hold && row.cert.sharp();
    }
    report["certificates"] = certs_json;

    SuiteResult result;
    result.report = std::move(report);
    result.all_hold = all_hold;
    result.plots = std::move(plots);
    return result;
}

std::vector<std::string> emit_plot_data(const SuiteResult& result, const std::string& dir) {
    fs::create_directories(dir);
    std::vector<std::string> written;
    for (const PlotEntry& entry : result.plots) {
        fs::path path = fs::path(dir) / (entry.name + ".dat");
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write plot file " + path.string());
        const int samples = 257;
        for (int i = 0; i < samples; ++i) {
            double x = entry.lo + (entry.hi - entry.lo) * static_cast<double>(i) /
                                      static_cast<double>(samples - 1);
            out << format_double(x) << ' ' << format_double(entry.fn(x)) << '\n';
        }
        written.push_back(path.string());
    }
    return written;
}

int run_suite(const RunConfig& config) {
    try {
        SuiteResult result = execute_suite(config);
        std::string text = dump_report_json(result.report);
        if (config.output.empty()) {
            std::cout << text << '\n';
        } else {
            std::ofstream out(config.output);
            if (!out) throw ConfigError("cannot write report to " + config.output);
            out << text << '\n';
        }
        if (!config.plots_dir.empty()) {
            emit_plot_data(result, config.plots_dir);
        }
        return result.all_hold ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace phimon
