// numerics.hpp - composite quadrature with refinement control and grid
// extrema over closed subintervals.
#pragma once

#include <functional>
#include <span>

#include "phimon/core.hpp"

namespace phimon {

struct QuadratureSpec {
    enum class Rule { composite_simpson, composite_trapezoid };

    Rule rule = Rule::composite_simpson;
    int initial_subdivisions = 8;  // >= 4 and even for simpson
    double tolerance = 1e-8;
    int max_refinements = 20;
};

/// Integrates an arbitrary callable over [a, b], splitting at the given
/// interior knots, doubling the subdivision count until two successive
/// totals differ by at most quad.tolerance.
double integrate_callable(const std::function<double(double)>& fn, double a, double b,
                          std::span<const double> interior_knots, const QuadratureSpec& quad);

/// Integral average of f over the hull of {a, b}; returns f(a) when a == b.
double integral_average(const RealFunction& f, double a, double b, const QuadratureSpec& quad);

/// Minimum of f over [a, b]. For sampled tables the value is exact (attained
/// at a sample or a range endpoint); otherwise it is the minimum over a
/// `resolution`-point closed uniform grid plus the declared knots, an upper
/// estimate of the true infimum.
ExtendedReal inf_over(const RealFunction& f, double a, double b, int resolution = 201);

/// Mirror image of inf_over.
ExtendedReal sup_over(const RealFunction& f, double a, double b, int resolution = 201);

}  // namespace phimon
