#include "phimon/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace phimon {

namespace {

Grid window_grid(const RealFunction& f, double x, double y, std::size_t n) {
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = x + (y - x) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    pts.front() = x;
    pts.back() = y;
    double margin = std::min(x - f.domain().lo(), f.domain().hi() - y);
    return Grid(f.domain(), std::move(pts), std::max(margin, 0.0));
}

void require_window(const Interval& domain, double x, double y) {
    if (!(x < y) || !domain.contains(x) || !domain.contains(y)) {
        throw HypothesisError("window endpoints must satisfy x < y inside the domain");
    }
}

// Ambient interval for an extremal witness: the window extended symmetrically,
// clipped so the error function stays evaluable everywhere on it.
Interval witness_domain(const ErrorFunction& phi, double x, double y, double reach) {
    double ext = y - x;
    if (std::isfinite(phi.domain_length())) {
        double spare = phi.domain_length() - reach;
        if (!(spare > 0.0)) {
            throw DomainError("error-function domain is too short for the window");
        }
        ext = std::min(ext, spare / 2.0);
    }
    return Interval(x - ext, y + ext);
}

}  // namespace

// ----------------------------------------------------------- generalized HH

CheckReport check_generalized_hh(const RealFunction& f, const ErrorFunction& phi, double u,
                                 double v, double w, double z, const QuadratureSpec& quad,
                                 double tol, GhhVariant variant) {
    for (double pt : {u, v, w, z}) {
        if (!f.domain().contains(pt)) {
            throw DomainError("all four points must lie inside the domain");
        }
    }
    double left = integral_average(f, u, v, quad);
    double right = integral_average(f, w, z, quad);
    double s0 = w - u;
    double s1 = z - v;
    if (!(std::max(std::abs(s0), std::abs(s1)) < phi.domain_length())) {
        throw DomainError("shift exceeds the error-function domain");
    }
    CheckAccumulator acc(tol);
    if (variant == GhhVariant::monotone) {
        if (!(u <= w) || !(v <= z)) {
            throw HypothesisError("the monotone variant needs u <= w and v <= z");
        }
        double budget = error_average(phi, s0, s1, quad, /*absolute_argument=*/false);
        acc.add(u, v, right + budget - left);
    } else {
        double budget = error_average(phi, s0, s1, quad, /*absolute_argument=*/true);
        acc.add(u, v, budget - std::abs(left - right));
    }
    return acc.finish();
}

// -------------------------------------------------------------------- HH

HhSlacks hh_bounds(const RealFunction& f, const ErrorFunction& phi, double x, double y,
                   const QuadratureSpec& quad, double screen_tol, std::size_t screen_n) {
    require_window(f.domain(), x, y);
    CheckReport screen = check_phi_monotone(f, phi, window_grid(f, x, y, screen_n), screen_tol);
    if (!screen.holds()) {
        throw HypothesisError("the function fails the Phi-monotonicity screen on [x, y]");
    }
    double average = integral_average(f, x, y, quad);
    double budget = integrate_error(phi, 0.0, y - x, quad) / (y - x);
    HhSlacks slacks;
    slacks.lower = average - (f(x) - budget);
    slacks.upper = (f(y) + budget) - average;
    return slacks;
}

std::pair<BoundCertificate, BoundCertificate> hh_sharpness(const ErrorFunction& phi, double x,
                                                           double y,
                                                           const QuadratureSpec& quad,
                                                           double tol,
                                                           std::optional<Interval> domain) {
    if (!(x < y)) throw HypothesisError("hh_sharpness needs x < y");
    require_subadditive_nondecreasing(phi, y - x);
    Interval ambient = domain.value_or(witness_domain(phi, x, y, y - x));

    ErrorFunction e = phi;
    RealFunction lower_witness = RealFunction::from_callable(
        [e, x](double u) { return u <= x ? 0.0 : -e(u - x); }, ambient, {x});
    RealFunction upper_witness = RealFunction::from_callable(
        [e, y](double u) { return u < y ? e(y - u) : 0.0; }, ambient, {y});

    double budget = integrate_error(phi, 0.0, y - x, quad) / (y - x);

    BoundCertificate lower;
    lower.kind = BoundCertificate::Kind::hh_lower;
    lower.tolerance = tol;
    lower.bound_value = budget;
    lower.achieved_value = lower_witness(x) - integral_average(lower_witness, x, y, quad);
    lower.gap = lower.bound_value - lower.achieved_value;
    lower.witness_function = lower_witness;

    BoundCertificate upper;
    upper.kind = BoundCertificate::Kind::hh_upper;
    upper.tolerance = tol;
    upper.bound_value = budget;
    upper.achieved_value = integral_average(upper_witness, x, y, quad) - upper_witness(y);
    upper.gap = upper.bound_value - upper.achieved_value;
    upper.witness_function = upper_witness;

    return {lower, upper};
}

// --------------------------------------------------------------- Ostrowski

CheckReport ostrowski_bound(const RealFunction& f, const ErrorFunction& phi, double x,
                            double y, double p, const QuadratureSpec& quad, double tol,
                            std::size_t screen_n) {
    require_window(f.domain(), x, y);
    if (!(x <= p) || !(p <= y)) throw HypothesisError("ostrowski needs x <= p <= y");
    CheckReport screen = check_phi_holder(f, phi, window_grid(f, x, y, screen_n), tol);
    if (!screen.holds()) {
        throw HypothesisError("the function fails the Hoelder screen on [x, y]");
    }
    double deviation = std::abs(f(p) - integral_average(f, x, y, quad));
    double bound = (integrate_error(phi, 0.0, p - x, quad) +
                    integrate_error(phi, 0.0, y - p, quad)) /
                   (y - x);
    CheckAccumulator acc(tol);
    acc.add(p, p, bound - deviation);
    return acc.finish();
}

BoundCertificate ostrowski_sharpness(const ErrorFunction& phi, double x, double y, double p,
                                     const QuadratureSpec& quad, double tol,
                                     std::optional<Interval> domain) {
    if (!(x < y)) throw HypothesisError("ostrowski_sharpness needs x < y");
    if (!(x <= p) || !(p <= y)) throw HypothesisError("ostrowski needs x <= p <= y");
    require_subadditive_nondecreasing(phi, y - x);
    require_absolutely_subadditive(phi, y - x, /*require_zero_at_zero=*/true);
    double reach = std::max(p - x, y - p);
    Interval ambient = domain.value_or(witness_domain(phi, x, y, reach));
    RealFunction witness = phi_p_function(phi, p, ambient);

    BoundCertificate cert;
    cert.kind = BoundCertificate::Kind::ostrowski;
    cert.tolerance = tol;
    cert.bound_value = (integrate_error(phi, 0.0, p - x, quad) +
                        integrate_error(phi, 0.0, y - p, quad)) /
                       (y - x);
    cert.achieved_value = std::abs(witness(p) - integral_average(witness, x, y, quad));
    cert.gap = cert.bound_value - cert.achieved_value;
    cert.witness_function = witness;
    return cert;
}

PowerCaseBounds power_case_bounds(double c, double p_exp, double x, double y, double point) {
    if (!(c >= 0.0)) throw HypothesisError("power bounds need c >= 0");
    if (!(p_exp > 0.0) || !(p_exp <= 1.0)) {
        throw HypothesisError("power bounds need an exponent in (0, 1]");
    }
    if (!(x <= point) || !(point <= y)) throw HypothesisError("need x <= point <= y");
    PowerCaseBounds bounds;
    bounds.hh = c / (p_exp + 1.0) * std::pow(y - x, p_exp);
    bounds.ostrowski =
        c / (p_exp + 1.0) * (std::pow(point - x, p_exp) + std::pow(y - point, p_exp));
    return bounds;
}

// ---------------------------------------------------------------- converses

CheckReport check_converse_premise(const RealFunction& f, const ErrorFunction& psi,
                                   ConverseVariant variant, const Grid& grid,
                                   const QuadratureSpec& quad, double tol) {
    if (!(grid.span() < psi.domain_length())) {
        throw DomainError("grid diameter reaches beyond the error-function domain");
    }
    const auto& g = grid.points();
    CheckAccumulator acc(tol);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            double u = g[i];
            double v = g[j];
            double average = integral_average(f, u, v, quad);
            double budget = psi(v - u);
            double slack = 0.0;
            switch (variant) {
                case ConverseVariant::left:
                    slack = average + budget - f(u);
                    break;
                case ConverseVariant::right:
                    slack = f(v) + budget - average;
                    break;
                case ConverseVariant::holder_left:
                    slack = budget - std::abs(f(u) - average);
                    break;
                case ConverseVariant::holder_right:
                    slack = budget - std::abs(f(v) - average);
                    break;
            }
            acc.add(u, v, slack);
        }
    }
    return acc.finish();
}

CheckReport check_converse_conclusion(const RealFunction& f, const ErrorFunction& psi,
                                      ConverseVariant variant, const Grid& grid,
                                      const QuadratureSpec& quad, double tol) {
    ErrorFunction phi =
        psi.kind() == ErrorBodyKind::power && psi.power_exponent() > 1.0
            ? ErrorFunction::power(0.0, 1.0)  // exponent above 1: plain increasingness
            : transform_psi_to_phi(psi, quad);
    bool holder =
        variant == ConverseVariant::holder_left || variant == ConverseVariant::holder_right;
    CheckReport report = holder ? check_phi_holder(f, phi, grid, tol)
                                : check_phi_monotone(f, phi, grid, tol);
    if (!report.holds()) {
        // one refinement step guards against a pure resolution artifact
        Grid finer = grid.refined();
        report = holder ? check_phi_holder(f, phi, finer, tol)
                        : check_phi_monotone(f, phi, finer, tol);
    }
    return report;
}

std::vector<RealFunction> iterate_T(const RealFunction& f, const ErrorFunction& psi, double x,
                                    double y, int n, const QuadratureSpec& quad, int samples,
                                    double blowup_limit) {
    require_window(f.domain(), x, y);
    if (n < 1) throw HypothesisError("iterate_T needs n >= 1");
    if (samples < 2) throw HypothesisError("iterate_T needs at least 2 samples");
    if (!(y - x < psi.domain_length())) {
        throw DomainError("window exceeds the error-function domain");
    }
    std::vector<double> us(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        us[static_cast<std::size_t>(j)] =
            x + (y - x) * static_cast<double>(j) / static_cast<double>(samples - 1);
    }
    us.front() = x;
    us.back() = y;

    std::vector<RealFunction> iterates;
    iterates.reserve(static_cast<std::size_t>(n));
    RealFunction current = f;
    for (int k = 0; k < n; ++k) {
        std::vector<double> values(us.size());
        for (std::size_t j = 0; j < us.size(); ++j) {
            double u = us[j];
            double v = j + 1 == us.size() ? current(y)
                                          : integral_average(current, u, y, quad) + psi(y - u);
            if (std::abs(v) > blowup_limit) {
                throw QuadratureError("operator iteration exceeded the blow-up guard");
            }
            values[j] = v;
        }
        current = RealFunction::from_table(us, std::move(values), InterpRule::linear,
                                           f.domain());
        iterates.push_back(current);
    }
    return iterates;
}

}  // namespace phimon
