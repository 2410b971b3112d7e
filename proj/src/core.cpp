#include "phimon/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "phimon/expression.hpp"

namespace phimon {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- Interval

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi) || !std::isfinite(lo) || hi == -kInf) {
        throw HypothesisError("interval endpoints must be finite (hi may be +inf)");
    }
    if (!(lo < hi)) {
        throw HypothesisError("interval requires lo < hi");
    }
}

bool Interval::finite() const { return std::isfinite(hi_); }

// ------------------------------------------------------------ ExtendedReal

ExtendedReal::ExtendedReal(double v) : v_(v) {
    if (std::isnan(v)) throw EvaluationError("ExtendedReal cannot hold NaN");
}

ExtendedReal ExtendedReal::neg_inf() { return ExtendedReal(-kInf); }
ExtendedReal ExtendedReal::pos_inf() { return ExtendedReal(kInf); }

bool ExtendedReal::is_finite() const { return std::isfinite(v_); }

// ------------------------------------------------------------------- Grid

Grid::Grid(Interval interval, std::vector<double> points, double margin)
    : interval_(interval), points_(std::move(points)), margin_(margin) {
    if (points_.size() < 2) throw HypothesisError("grid needs at least 2 points");
    if (!(margin_ >= 0.0)) throw HypothesisError("grid margin must be >= 0");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        if (!(points_[i] < points_[i + 1])) {
            throw HypothesisError("grid points must be strictly increasing");
        }
    }
    // lo is included only for grids over half-open error-function domains.
    if (points_.front() < interval_.lo() || !(points_.back() < interval_.hi())) {
        throw HypothesisError("grid points must lie inside the interval");
    }
}

bool Grid::contains_point(double p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    double scale = std::max({1.0, std::abs(p)});
    if (it != points_.end() && std::abs(*it - p) <= 1e-12 * scale) return true;
    if (it != points_.begin() && std::abs(*(it - 1) - p) <= 1e-12 * scale) return true;
    return false;
}

double Grid::nearest_point(double p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end()) return points_.back();
    if (it == points_.begin()) return points_.front();
    return (*it - p) < (p - *(it - 1)) ? *it : *(it - 1);
}

Grid Grid::refined() const {
    std::size_t n = 2 * points_.size() - 1;
    std::vector<double> pts(n);
    double a = front();
    double b = back();
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    pts.front() = a;
    pts.back() = b;
    return Grid(interval_, std::move(pts), margin_);
}

Grid make_grid(const Interval& interval, std::size_t n, double margin, double horizon) {
    if (n < 2) throw HypothesisError("make_grid requires n >= 2");
    if (!(margin > 0.0)) throw HypothesisError("make_grid requires margin > 0");
    double a = interval.lo() + margin;
    double b;
    if (interval.finite()) {
        if (!(margin < interval.length() / 2.0)) {
            throw HypothesisError("make_grid margin must be below half the interval length");
        }
        b = interval.hi() - margin;
    } else {
        b = horizon;
    }
    if (!(a < b)) throw HypothesisError("make_grid range is degenerate");
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    pts.front() = a;
    pts.back() = b;
    return Grid(interval, std::move(pts), margin);
}

Grid make_error_grid(double upper, std::size_t n, double right_margin) {
    if (!(upper > 0.0) || !std::isfinite(upper)) {
        throw HypothesisError("error grid needs a finite positive upper bound");
    }
    if (n < 2) throw HypothesisError("error grid requires n >= 2");
    if (!(right_margin >= 0.0) || !(right_margin < upper)) {
        throw HypothesisError("error grid margin must lie in [0, upper)");
    }
    double b = upper - right_margin;
    if (right_margin == 0.0) {
        // keep the points strictly below `upper`, which is excluded
        b = upper * (1.0 - 1e-12);
    }
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = b * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    pts.front() = 0.0;
    pts.back() = b;
    return Grid(Interval(0.0, upper), std::move(pts), 0.0);
}

Grid make_error_grid(double upper, std::size_t n) {
    return make_error_grid(upper, n, upper / 1000.0);
}

// ----------------------------------------------------------- RealFunction

struct RealFunction::Body {
    virtual ~Body() = default;
    virtual double eval(double x) const = 0;
    virtual bool is_table() const { return false; }
};

namespace {

struct ExpressionBody final : RealFunction::Body {
    Expression expr;
    explicit ExpressionBody(Expression e) : expr(std::move(e)) {}
    double eval(double x) const override { return expr(x); }
};

struct TableBody final : RealFunction::Body {
    std::vector<double> xs;
    std::vector<double> ys;
    InterpRule rule;

    double eval(double x) const override {
        // outside the sample hull the nearest sample extends the table
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        switch (rule) {
            case InterpRule::left_step:
                return ys[i];
            case InterpRule::right_step:
                return x == xs[i] ? ys[i] : ys[i + 1];
            case InterpRule::linear: {
                double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                return ys[i] + (ys[i + 1] - ys[i]) * t;
            }
        }
        throw EvaluationError("corrupt table body");
    }

    bool is_table() const override { return true; }
};

struct CallableBody final : RealFunction::Body {
    std::function<double(double)> fn;
    double eval(double x) const override { return fn(x); }
};

}  // namespace

RealFunction::RealFunction(Interval domain, std::shared_ptr<const Body> body,
                           std::vector<double> knots)
    : domain_(domain), body_(std::move(body)), knots_(std::move(knots)) {
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
    std::erase_if(knots_, [&](double k) { return !domain_.contains(k); });
}

RealFunction RealFunction::from_expression(std::string_view source, Interval domain) {
    Expression e = Expression::parse(source);
    std::vector<double> knots = e.knots();
    auto body = std::make_shared<const ExpressionBody>(std::move(e));
    return RealFunction(domain, std::move(body), std::move(knots));
}

RealFunction RealFunction::from_table(std::vector<double> xs, std::vector<double> ys,
                                      InterpRule rule, Interval domain) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw HypothesisError("table needs matching nonempty sample vectors");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!domain.contains(xs[i])) {
            throw HypothesisError("table samples must lie strictly inside the domain");
        }
        if (i + 1 < xs.size() && !(xs[i] < xs[i + 1])) {
            throw HypothesisError("table samples must be strictly increasing");
        }
    }
    auto body = std::make_shared<TableBody>();
    body->xs = xs;
    body->ys = std::move(ys);
    body->rule = rule;
    return RealFunction(domain, std::move(body), std::move(xs));
}

RealFunction RealFunction::from_callable(std::function<double(double)> fn, Interval domain,
                                         std::vector<double> knots) {
    auto body = std::make_shared<CallableBody>();
    body->fn = std::move(fn);
    return RealFunction(domain, std::move(body), std::move(knots));
}

double RealFunction::operator()(double x) const {
    if (!domain_.contains(x)) {
        throw DomainError("evaluation point " + std::to_string(x) +
                          " lies outside the open domain (" + std::to_string(domain_.lo()) +
                          ", " + std::to_string(domain_.hi()) + ")");
    }
    return body_->eval(x);
}

bool RealFunction::is_sampled_table() const { return body_->is_table(); }

RealFunction negate(const RealFunction& f) {
    RealFunction g = f;
    return RealFunction::from_callable([g](double x) { return -g(x); }, f.domain(), f.knots());
}

namespace {

RealFunction pointwise_extreme(const std::vector<RealFunction>& fs, bool take_min) {
    if (fs.empty()) throw HypothesisError("pointwise extreme of an empty family");
    double lo = fs.front().domain().lo();
    double hi = fs.front().domain().hi();
    std::vector<double> knots;
    for (const RealFunction& f : fs) {
        lo = std::max(lo, f.domain().lo());
        hi = std::min(hi, f.domain().hi());
        knots.insert(knots.end(), f.knots().begin(), f.knots().end());
    }
    Interval domain(lo, hi);
    std::vector<RealFunction> copy = fs;
    auto fn = [copy, take_min](double x) {
        double v = copy.front()(x);
        for (std::size_t i = 1; i < copy.size(); ++i) {
            double w = copy[i](x);
            v = take_min ? std::min(v, w) : std::max(v, w);
        }
        return v;
    };
    return RealFunction::from_callable(std::move(fn), domain, std::move(knots));
}

}  // namespace

RealFunction pointwise_min(const std::vector<RealFunction>& fs) {
    return pointwise_extreme(fs, true);
}

RealFunction pointwise_max(const std::vector<RealFunction>& fs) {
    return pointwise_extreme(fs, false);
}

// -------------------------------------------------------- CheckAccumulator

CheckAccumulator::CheckAccumulator(double tolerance)
    : tolerance_(tolerance), worst_(kInf) {
    if (!(tolerance >= 0.0)) throw HypothesisError("check tolerance must be >= 0");
}

void CheckAccumulator::add(double x, double y, double slack) {
    if (std::isnan(slack)) throw EvaluationError("check produced a NaN slack");
    if (slack < worst_) {
        worst_ = slack;
        worst_x_ = x;
        worst_y_ = y;
    }
    ++count_;
}

void CheckAccumulator::add_condition(double x, double y, bool satisfied) {
    add(x, y, satisfied ? kInf : -std::numeric_limits<double>::max());
}

CheckReport CheckAccumulator::finish() const {
    CheckReport report;
    report.pairs_checked = count_;
    report.tolerance = tolerance_;
    report.worst_margin = count_ == 0 || worst_ == kInf ? 0.0 : worst_;
    if (report.worst_margin < -tolerance_) {
        report.verdict = Verdict::fails;
        report.witness = Witness{worst_x_, worst_y_, report.worst_margin};
    } else {
        report.verdict = Verdict::holds;
        report.witness.reset();
    }
    return report;
}

// -------------------------------------------------------------------- CSV

namespace {

std::string strip_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // UTF-8 BOM
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }
    return line;
}

double parse_csv_number(const std::string& field, std::size_t line_no) {
    std::size_t begin = field.find_first_not_of(" \t");
    std::size_t end = field.find_last_not_of(" \t");
    if (begin == std::string::npos) {
        throw ConfigError("empty CSV field on line " + std::to_string(line_no));
    }
    double v = 0.0;
    auto res = std::from_chars(field.data() + begin, field.data() + end + 1, v);
    if (res.ec != std::errc{} || res.ptr != field.data() + end + 1) {
        throw ConfigError("invalid CSV number '" + field + "' on line " +
                          std::to_string(line_no));
    }
    return v;
}

}  // namespace

SampledCsv load_sampled_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV file: " + path);
    if (strip_csv_line(line) != "x,y") {
        throw ConfigError("CSV header must be exactly 'x,y' in " + path);
    }
    SampledCsv out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_csv_line(line);
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("missing comma on CSV line " + std::to_string(line_no) +
                              " of " + path);
        }
        double x = parse_csv_number(line.substr(0, comma), line_no);
        double y = parse_csv_number(line.substr(comma + 1), line_no);
        if (!out.xs.empty() && !(x > out.xs.back())) {
            throw ConfigError("CSV x values must be strictly increasing (line " +
                              std::to_string(line_no) + " of " + path + ")");
        }
        out.xs.push_back(x);
        out.ys.push_back(y);
    }
    if (out.xs.empty()) throw ConfigError("CSV has no sample rows: " + path);
    return out;
}

}  // namespace phimon
