#include "phimon/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace phimon {

namespace {

void validate(const QuadratureSpec& quad) {
    if (!(quad.tolerance > 0.0)) throw HypothesisError("quadrature tolerance must be > 0");
    if (quad.rule == QuadratureSpec::Rule::composite_simpson) {
        if (quad.initial_subdivisions < 4 || quad.initial_subdivisions % 2 != 0) {
            throw HypothesisError("simpson needs initial_subdivisions >= 4 and even");
        }
    } else if (quad.initial_subdivisions < 1) {
        throw HypothesisError("trapezoid needs initial_subdivisions >= 1");
    }
    if (quad.max_refinements < 1) throw HypothesisError("max_refinements must be >= 1");
}

double composite_piece(const std::function<double(double)>& fn, double a, double b, long n,
                       QuadratureSpec::Rule rule) {
    double h = (b - a) / static_cast<double>(n);
    // pieces are delimited by knots, where the integrand may jump; endpoint
    // evaluations are nudged inward so each piece integrates its continuous
    // extension
    double fa = fn(a + (b - a) * 1e-12);
    double fb = fn(b - (b - a) * 1e-12);
    if (rule == QuadratureSpec::Rule::composite_trapezoid) {
        double sum = 0.5 * (fa + fb);
        for (long i = 1; i < n; ++i) sum += fn(a + h * static_cast<double>(i));
        return sum * h;
    }
    double sum = fa + fb;
    for (long i = 1; i < n; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * fn(a + h * static_cast<double>(i));
    }
    return sum * h / 3.0;
}

std::vector<std::pair<double, double>> split_at_knots(double a, double b,
                                                      std::span<const double> knots) {
    std::vector<double> bounds;
    bounds.push_back(a);
    for (double k : knots) {
        if (a < k && k < b) bounds.push_back(k);
    }
    bounds.push_back(b);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    std::vector<std::pair<double, double>> pieces;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        pieces.emplace_back(bounds[i], bounds[i + 1]);
    }
    return pieces;
}

double refine_to_tolerance(const std::function<double(double)>& level_total,
                           const QuadratureSpec& quad) {
    double prev = level_total(static_cast<double>(quad.initial_subdivisions));
    long n = quad.initial_subdivisions;
    for (int k = 0; k < quad.max_refinements; ++k) {
        n *= 2;
        double cur = level_total(static_cast<double>(n));
        if (std::abs(cur - prev) <= quad.tolerance) return cur;
        prev = cur;
    }
    throw QuadratureError("quadrature did not converge within max_refinements");
}

}  // namespace

double integrate_callable(const std::function<double(double)>& fn, double a, double b,
                          std::span<const double> interior_knots, const QuadratureSpec& quad) {
    validate(quad);
    if (a == b) return 0.0;
    if (!(a < b)) throw HypothesisError("integrate_callable requires a <= b");
    auto pieces = split_at_knots(a, b, interior_knots);
    auto level_total = [&](double n_level) {
        long n = static_cast<long>(n_level);
        double total = 0.0;
        for (const auto& [lo, hi] : pieces) {
            total += composite_piece(fn, lo, hi, n, quad.rule);
        }
        return total;
    };
    return refine_to_tolerance(level_total, quad);
}

double integral_average(const RealFunction& f, double a, double b, const QuadratureSpec& quad) {
    validate(quad);
    if (!f.domain().contains(a) || !f.domain().contains(b)) {
        throw DomainError("integral_average endpoints must lie inside the domain");
    }
    if (a == b) return f(a);
    double lo = std::min(a, b);
    double hi = std::max(a, b);
    auto pieces = split_at_knots(lo, hi, f.knots());
    double width = hi - lo;
    auto level_average = [&](double n_level) {
        long n = static_cast<long>(n_level);
        double total = 0.0;
        for (const auto& [pa, pb] : pieces) {
            total += composite_piece([&f](double x) { return f(x); }, pa, pb, n, quad.rule);
        }
        return total / width;
    };
    return refine_to_tolerance(level_average, quad);
}

namespace {

ExtendedReal extreme_over(const RealFunction& f, double a, double b, int resolution,
                          bool take_min) {
    if (!(a <= b)) throw HypothesisError("range extrema require a <= b");
    if (!f.domain().contains(a) || !f.domain().contains(b)) {
        throw DomainError("range extrema endpoints must lie inside the domain");
    }
    if (resolution < 2) throw HypothesisError("range extrema require resolution >= 2");
    if (a == b) return ExtendedReal(f(a));

    double best = f(a);
    auto consider = [&](double v) { best = take_min ? std::min(best, v) : std::max(best, v); };
    consider(f(b));
    for (double k : f.knots()) {
        if (a < k && k < b) consider(f(k));
    }
    if (!f.is_sampled_table()) {
        for (int i = 1; i + 1 < resolution; ++i) {
            double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(resolution - 1);
            consider(f(t));
        }
    }
    return ExtendedReal(best);
}

}  // namespace

ExtendedReal inf_over(const RealFunction& f, double a, double b, int resolution) {
    return extreme_over(f, a, b, resolution, true);
}

ExtendedReal sup_over(const RealFunction& f, double a, double b, int resolution) {
    return extreme_over(f, a, b, resolution, false);
}

}  // namespace phimon
