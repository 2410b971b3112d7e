#include "phimon/error_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace phimon {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

struct ErrorFunction::Body {
    ErrorBodyKind kind = ErrorBodyKind::power;
    double domain_length = kInf;

    // power
    double c = 0.0;
    double p = 1.0;

    // tabulated
    std::optional<RealFunction> fn;

    // transformed
    std::shared_ptr<const Body> base;
    QuadratureSpec quad;
    bool force_quadrature = false;
    mutable std::mutex memo_mutex;
    mutable std::unordered_map<double, double> memo;

    double eval(double t) const;
};

namespace {

struct PowerFit {
    double coefficient = 0.0;
    double exponent = 0.0;
    bool all_zero = false;
    bool usable = false;
};

// Least-squares fit of log v = log C + q log s over positive probe pairs.
PowerFit fit_power(const std::vector<double>& s, const std::vector<double>& v) {
    PowerFit fit;
    std::vector<double> ls, lv;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (v[i] > 0.0) {
            ls.push_back(std::log(s[i]));
            lv.push_back(std::log(v[i]));
        }
    }
    if (ls.empty()) {
        fit.all_zero = true;
        return fit;
    }
    if (ls.size() < 2) return fit;
    double n = static_cast<double>(ls.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        sx += ls[i];
        sy += lv[i];
        sxx += ls[i] * ls[i];
        sxy += ls[i] * lv[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    fit.coefficient = std::exp((sy - fit.exponent * sx) / n);
    fit.usable = true;
    return fit;
}

double transformed_power_closed_form(const ErrorFunction::Body& base, double t) {
    return base.c * (base.p + 1.0) / base.p * std::pow(t, base.p);
}

}  // namespace

double ErrorFunction::Body::eval(double t) const {
    switch (kind) {
        case ErrorBodyKind::power:
            return c * std::pow(t, p);
        case ErrorBodyKind::tabulated:
            return (*fn)(t);
        case ErrorBodyKind::transformed: {
            if (t == 0.0) return base->eval(0.0);
            if (base->kind == ErrorBodyKind::power && !force_quadrature) {
                return transformed_power_closed_form(*base, t);
            }
            {
                std::scoped_lock lock(memo_mutex);
                auto it = memo.find(t);
                if (it != memo.end()) return it->second;
            }
            // int_delta^t Psi(s)/s ds under s = e^w, which removes the
            // endpoint singularity; [0, delta] is covered by a power fit.
            double delta = t * 1e-4;
            double tail = integrate_callable(
                [this](double w) {
                    double s = std::exp(w);
                    return base->eval(s);
                },
                std::log(delta), std::log(t), {}, quad);
            std::vector<double> probes, values;
            for (int i = 0; i < 5; ++i) {
                double s = delta * std::pow(2.0, -i);
                probes.push_back(s);
                values.push_back(base->eval(s));
            }
            double head = 0.0;
            PowerFit fit = fit_power(probes, values);
            if (!fit.all_zero) {
                if (!fit.usable || fit.exponent <= 0.0) {
                    throw HypothesisError(
                        "transform integrand is singular near 0 (no positive power fit)");
                }
                head = fit.coefficient * std::pow(delta, fit.exponent) / fit.exponent;
            }
            double value = base->eval(t) + head + tail;
            std::scoped_lock lock(memo_mutex);
            memo.emplace(t, value);
            return value;
        }
    }
    throw EvaluationError("corrupt error-function body");
}

ErrorFunction::ErrorFunction(std::shared_ptr<const Body> body) : body_(std::move(body)) {}

ErrorFunction ErrorFunction::power(double c, double p) {
    if (!(c >= 0.0)) throw HypothesisError("power error function needs c >= 0");
    if (!(p > 0.0)) throw HypothesisError("power error function needs p > 0");
    auto body = std::make_shared<Body>();
    body->kind = ErrorBodyKind::power;
    body->c = c;
    body->p = p;
    body->domain_length = kInf;
    return ErrorFunction(std::move(body));
}

ErrorFunction ErrorFunction::tabulated(RealFunction fn) {
    double length = fn.domain().hi();
    return tabulated(std::move(fn), length);
}

ErrorFunction ErrorFunction::tabulated(RealFunction fn, double domain_length) {
    if (!(domain_length > 0.0)) {
        throw HypothesisError("error function needs a positive domain length");
    }
    if (!(fn.domain().lo() < 0.0) || fn.domain().hi() < domain_length) {
        throw HypothesisError(
            "the backing function must be evaluable on all of [0, domain_length)");
    }
    auto body = std::make_shared<Body>();
    body->kind = ErrorBodyKind::tabulated;
    body->fn = std::move(fn);
    body->domain_length = domain_length;
    return ErrorFunction(std::move(body));
}

ErrorFunction ErrorFunction::transformed(ErrorFunction base, QuadratureSpec quad,
                                         bool force_quadrature) {
    auto body = std::make_shared<Body>();
    body->kind = ErrorBodyKind::transformed;
    body->base = base.body_;
    body->quad = quad;
    body->force_quadrature = force_quadrature;
    body->domain_length = base.domain_length();
    return ErrorFunction(std::move(body));
}

double ErrorFunction::operator()(double t) const {
    if (t < 0.0 || !(t < body_->domain_length)) {
        throw DomainError("error-function argument " + std::to_string(t) +
                          " outside [0, " + std::to_string(body_->domain_length) + ")");
    }
    return body_->eval(t);
}

double ErrorFunction::domain_length() const { return body_->domain_length; }

ErrorBodyKind ErrorFunction::kind() const { return body_->kind; }

double ErrorFunction::power_coefficient() const {
    if (body_->kind != ErrorBodyKind::power) {
        throw HypothesisError("not a power error function");
    }
    return body_->c;
}

double ErrorFunction::power_exponent() const {
    if (body_->kind != ErrorBodyKind::power) {
        throw HypothesisError("not a power error function");
    }
    return body_->p;
}

// ---------------------------------------------------------------- transform

ErrorFunction transform_psi_to_phi(const ErrorFunction& psi, QuadratureSpec quad) {
    if (psi.kind() == ErrorBodyKind::power) {
        double c = psi.power_coefficient();
        double p = psi.power_exponent();
        return ErrorFunction::power(c * (p + 1.0) / p, p);
    }

    double upper = std::isfinite(psi.domain_length()) ? psi.domain_length() : 1.0;

    // nonnegativity screen
    Grid screen = make_error_grid(upper, 33);
    for (double t : screen.points()) {
        if (psi(t) < -1e-12) {
            throw HypothesisError("transform input must be nonnegative");
        }
    }

    // integrability screen: Psi must look like C*t^q with q > 0 near 0,
    // judged from the five smallest positive probe points.
    std::vector<double> probes;
    double probe0 = upper / 100.0;
    for (int i = 0; i < 5; ++i) probes.push_back(probe0 * std::pow(10.0, -i));
    std::sort(probes.begin(), probes.end());
    std::vector<double> values;
    for (double s : probes) values.push_back(psi(s));
    PowerFit fit = fit_power(probes, values);
    if (!fit.all_zero && (!fit.usable || fit.exponent <= 0.0)) {
        throw HypothesisError(
            "transform integrand Psi(t)/t fails the integrability screen near 0");
    }

    return ErrorFunction::transformed(psi, quad);
}

// ---------------------------------------------------------------- integrals

double integrate_error(const ErrorFunction& phi, double a, double b,
                       const QuadratureSpec& quad) {
    if (!(0.0 <= a) || !(a <= b)) throw HypothesisError("integrate_error needs 0 <= a <= b");
    if (a == b) return 0.0;
    if (phi.kind() == ErrorBodyKind::power) {
        double c = phi.power_coefficient();
        double p = phi.power_exponent();
        return c / (p + 1.0) * (std::pow(b, p + 1.0) - std::pow(a, p + 1.0));
    }
    if (!(b < phi.domain_length())) {
        throw DomainError("integration range exceeds the error-function domain");
    }
    return integrate_callable([&phi](double t) { return phi(t); }, a, b, {}, quad);
}

double error_average(const ErrorFunction& phi, double s0, double s1,
                     const QuadratureSpec& quad, bool absolute_argument) {
    double lo = std::min(s0, s1);
    double hi = std::max(s0, s1);
    if (lo == hi) return phi(absolute_argument ? std::abs(lo) : lo);
    if (!absolute_argument) {
        if (lo < 0.0) throw DomainError("error_average needs nonnegative arguments");
        return integrate_error(phi, lo, hi, quad) / (hi - lo);
    }
    double knot = 0.0;
    std::span<const double> knots;
    if (lo < 0.0 && 0.0 < hi) knots = std::span<const double>(&knot, 1);
    double total = integrate_callable([&phi](double s) { return phi(std::abs(s)); }, lo, hi,
                                      knots, quad);
    return total / (hi - lo);
}

// ------------------------------------------------------------------- checks

namespace {

void require_grid_in_error_domain(const ErrorFunction& phi, const Grid& grid) {
    if (grid.front() < 0.0 || !(grid.back() < phi.domain_length())) {
        throw DomainError("grid must lie inside [0, domain_length)");
    }
}

}  // namespace

CheckReport check_nondecreasing(const ErrorFunction& phi, const Grid& grid, double tol) {
    require_grid_in_error_domain(phi, grid);
    const auto& t = grid.points();
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = phi(t[i]);
    CheckAccumulator acc(tol);
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            acc.add(t[i], t[j], v[j] - v[i]);
        }
    }
    return acc.finish();
}

CheckReport check_subadditive(const ErrorFunction& phi, const Grid& grid, double tol) {
    require_grid_in_error_domain(phi, grid);
    const auto& t = grid.points();
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = phi(t[i]);
    CheckAccumulator acc(tol);
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i; j < t.size(); ++j) {
            double sum = t[i] + t[j];
            if (!(sum < phi.domain_length())) continue;
            acc.add(t[i], t[j], v[i] + v[j] - phi(sum));
        }
    }
    return acc.finish();
}

CheckReport check_absolutely_subadditive(const ErrorFunction& phi, const Grid& grid,
                                         double tol) {
    require_grid_in_error_domain(phi, grid);
    const auto& t = grid.points();
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = phi(t[i]);
    CheckAccumulator acc(tol);
    const double signs[2] = {1.0, -1.0};
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i; j < t.size(); ++j) {
            for (double su : signs) {
                for (double sv : signs) {
                    double u = su * t[i];
                    double w = sv * t[j];
                    double s = std::abs(u + w);
                    if (!(s < phi.domain_length())) continue;
                    acc.add(u, w, v[i] + v[j] - phi(s));
                }
            }
        }
    }
    return acc.finish();
}

CheckReport verify_cphi_identity(const ErrorFunction& psi, const ErrorFunction& phi,
                                 const Grid& grid, const QuadratureSpec& quad, double tol) {
    if (!(grid.front() > 0.0)) {
        throw DomainError("the identity grid must lie strictly inside (0, domain_length)");
    }
    require_grid_in_error_domain(phi, grid);
    CheckAccumulator acc(tol);
    for (double u : grid.points()) {
        double residual = psi(u) + integrate_error(phi, 0.0, u, quad) / u - phi(u);
        acc.add(u, u, -std::abs(residual));
    }
    return acc.finish();
}

// ------------------------------------------------------------------ screens

namespace {

Grid screen_grid(const ErrorFunction& phi, double range) {
    double upper = range;
    if (std::isfinite(phi.domain_length())) {
        upper = std::min(upper, phi.domain_length() * (1.0 - 1e-9));
    }
    if (!(upper > 0.0)) throw HypothesisError("screen range must be positive");
    return make_error_grid(upper, 33, 0.0);
}

}  // namespace

void require_subadditive_nondecreasing(const ErrorFunction& phi, double range, double tol) {
    Grid grid = screen_grid(phi, range);
    CheckReport nd = check_nondecreasing(phi, grid, tol);
    if (!nd.holds()) {
        throw HypothesisError("error function is not nondecreasing on the screening grid");
    }
    CheckReport sa = check_subadditive(phi, grid, tol);
    if (!sa.holds()) {
        throw HypothesisError("error function is not subadditive on the screening grid");
    }
}

void require_absolutely_subadditive(const ErrorFunction& phi, double range,
                                    bool require_zero_at_zero, double tol) {
    Grid grid = screen_grid(phi, range);
    if (require_zero_at_zero && std::abs(phi(0.0)) > tol) {
        throw HypothesisError("error function must vanish at 0");
    }
    CheckReport report = check_absolutely_subadditive(phi, grid, tol);
    if (!report.holds()) {
        throw HypothesisError(
            "error function is not absolutely subadditive on the screening grid");
    }
}

}  // namespace phimon
