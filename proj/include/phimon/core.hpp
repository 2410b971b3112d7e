// core.hpp - domain primitives: intervals, grids, function representations,
// extended reals and check reports shared by the whole library.
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phimon {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside a function's domain or an error function's range.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Arithmetic failure inside expression evaluation (log of a nonpositive input, ...).
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Malformed expression text.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Malformed CLI configuration or input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A screened hypothesis or precondition does not hold.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Quadrature refinement failed to converge, or an iteration blew up.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Nonempty open interval (lo, hi); hi may be +infinity.
class Interval {
public:
    Interval(double lo, double hi);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double length() const { return hi_ - lo_; }
    bool finite() const;
    /// Strict interior membership.
    bool contains(double x) const { return lo_ < x && x < hi_; }

private:
    double lo_;
    double hi_;
};

/// A real value extended with the symbolic endpoints -inf / +inf.
/// The ordering is total: -inf < every finite value < +inf. NaN is rejected.
class ExtendedReal {
public:
    ExtendedReal() = default;
    ExtendedReal(double v);  // NOLINT: implicit by design

    static ExtendedReal neg_inf();
    static ExtendedReal pos_inf();

    bool is_finite() const;
    double value() const { return v_; }

    friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
    friend bool operator<(ExtendedReal a, ExtendedReal b) { return a.v_ < b.v_; }
    friend bool operator<=(ExtendedReal a, ExtendedReal b) { return a.v_ <= b.v_; }
    friend bool operator>(ExtendedReal a, ExtendedReal b) { return a.v_ > b.v_; }
    friend bool operator>=(ExtendedReal a, ExtendedReal b) { return a.v_ >= b.v_; }

private:
    double v_ = 0.0;
};

/// Ordered evaluation points inside an interval. Grids over open intervals
/// keep a positive margin to both endpoints; grids over the half-open
/// error-function domain [0, L) may start exactly at 0.
class Grid {
public:
    Grid(Interval interval, std::vector<double> points, double margin);

    const Interval& interval() const { return interval_; }
    const std::vector<double>& points() const { return points_; }
    double margin() const { return margin_; }
    std::size_t size() const { return points_.size(); }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }
    double span() const { return back() - front(); }
    double mean_spacing() const { return span() / static_cast<double>(size() - 1); }

    bool contains_point(double p) const;
    double nearest_point(double p) const;
    /// Same range at doubled density (2n-1 equally spaced points).
    Grid refined() const;

private:
    Interval interval_;
    std::vector<double> points_;
    double margin_;
};

/// n equally spaced points in [lo+margin, hi-margin]; an infinite right
/// endpoint is truncated at `horizon`.
Grid make_grid(const Interval& interval, std::size_t n, double margin, double horizon = 10.0);

/// n equally spaced points in [0, upper-right_margin] for checks over the
/// half-open error-function domain [0, upper).
Grid make_error_grid(double upper, std::size_t n, double right_margin);
Grid make_error_grid(double upper, std::size_t n);

enum class InterpRule { linear, left_step, right_step };

/// A function on an open interval: a closed-form expression, a sampled table
/// with an interpolation rule, or an opaque callable with declared knots.
/// Immutable and cheap to copy.
class RealFunction {
public:
    static RealFunction from_expression(std::string_view source, Interval domain);
    static RealFunction from_table(std::vector<double> xs, std::vector<double> ys,
                                   InterpRule rule, Interval domain);
    static RealFunction from_callable(std::function<double(double)> fn, Interval domain,
                                      std::vector<double> knots = {});

    /// Evaluate at a point strictly inside the domain.
    double operator()(double x) const;

    const Interval& domain() const { return domain_; }
    /// Interior kink/jump abscissae, sorted; quadrature splits at these.
    const std::vector<double>& knots() const { return knots_; }
    /// True for sampled-table bodies, whose extrema over a closed range are
    /// attained at samples or range endpoints.
    bool is_sampled_table() const;

    struct Body;

private:
    RealFunction(Interval domain, std::shared_ptr<const Body> body, std::vector<double> knots);

    Interval domain_;
    std::shared_ptr<const Body> body_;
    std::vector<double> knots_;
};

RealFunction negate(const RealFunction& f);
/// Pointwise extremes over a nonempty family; the domain is the intersection.
RealFunction pointwise_min(const std::vector<RealFunction>& fs);
RealFunction pointwise_max(const std::vector<RealFunction>& fs);

enum class Verdict { holds, fails };

struct Witness {
    double x = 0.0;
    double y = 0.0;
    double slack = 0.0;
};

/// Verdict of a verification run. fails iff worst_margin < -tolerance iff a
/// witness is present; witness.slack equals worst_margin.
struct CheckReport {
    Verdict verdict = Verdict::holds;
    double worst_margin = 0.0;
    std::optional<Witness> witness;
    std::size_t pairs_checked = 0;
    double tolerance = 0.0;

    bool holds() const { return verdict == Verdict::holds; }
};

/// Accumulates per-pair slacks and finalizes them into a CheckReport.
class CheckAccumulator {
public:
    explicit CheckAccumulator(double tolerance);

    void add(double x, double y, double slack);
    /// A hard pass/fail term with no numeric margin (e.g. finiteness).
    void add_condition(double x, double y, bool satisfied);
    CheckReport finish() const;

private:
    double tolerance_;
    double worst_;
    double worst_x_ = 0.0;
    double worst_y_ = 0.0;
    std::size_t count_ = 0;
};

struct SampledCsv {
    std::vector<double> xs;
    std::vector<double> ys;
};

/// Reads a `x,y`-headed CSV of strictly increasing sample pairs.
SampledCsv load_sampled_csv(const std::string& path);

}  // namespace phimon
