// error_function.hpp - error-function algebra: construction, structural
// property checks and the integral transform Phi(u) = Psi(u) + int_0^u Psi(t)/t dt.
#pragma once

#include <memory>

#include "phimon/core.hpp"
#include "phimon/numerics.hpp"

namespace phimon {

enum class ErrorBodyKind { power, tabulated, transformed };

/// A nonnegative function Phi on [0, domain_length) measuring the allowed
/// deviation in approximate-monotonicity checks. Immutable; evaluation of
/// transformed bodies memoizes internally and is safe to call concurrently.
class ErrorFunction {
public:
    /// Phi(t) = c * t^p with c >= 0 and p > 0, on [0, +inf).
    static ErrorFunction power(double c, double p);

    /// An arbitrary function restricted to [0, domain_length); the backing
    /// function must be evaluable on that whole range.
    static ErrorFunction tabulated(RealFunction fn);
    static ErrorFunction tabulated(RealFunction fn, double domain_length);

    /// The transform image Phi(u) = Psi(u) + int_0^u Psi(t)/t dt of `base`,
    /// evaluated analytically for power bases unless force_quadrature is set.
    static ErrorFunction transformed(ErrorFunction base, QuadratureSpec quad = {},
                                     bool force_quadrature = false);

    /// Evaluate at t in [0, domain_length).
    double operator()(double t) const;

    double domain_length() const;
    ErrorBodyKind kind() const;
    double power_coefficient() const;  // power bodies only
    double power_exponent() const;     // power bodies only

    struct Body;

private:
    explicit ErrorFunction(std::shared_ptr<const Body> body);
    std::shared_ptr<const Body> body_;
};

/// Lemma-style transform: power(c, p) maps exactly to power(c*(p+1)/p, p);
/// other bodies are screened for integrability of Psi(t)/t near 0 (power fit
/// over the smallest samples must find a positive exponent) and wrapped.
ErrorFunction transform_psi_to_phi(const ErrorFunction& psi, QuadratureSpec quad = {});

/// int_a^b Phi, analytic for power bodies, by refinement quadrature otherwise.
double integrate_error(const ErrorFunction& phi, double a, double b,
                       const QuadratureSpec& quad);

/// Integral average of Phi (or Phi o |.|) over the hull of {s0, s1};
/// equals the point value when s0 == s1.
double error_average(const ErrorFunction& phi, double s0, double s1,
                     const QuadratureSpec& quad, bool absolute_argument = false);

/// Phi(t_i) <= Phi(t_j) + tol for all grid pairs t_i < t_j.
CheckReport check_nondecreasing(const ErrorFunction& phi, const Grid& grid, double tol);

/// Phi(u+v) <= Phi(u) + Phi(v) + tol for grid pairs with u+v < domain_length.
CheckReport check_subadditive(const ErrorFunction& phi, const Grid& grid, double tol);

/// Phi(|u+v|) <= Phi(|u|) + Phi(|v|) + tol over signed grid pairs.
CheckReport check_absolutely_subadditive(const ErrorFunction& phi, const Grid& grid,
                                         double tol);

/// |Psi(u) + (1/u) int_0^u Phi - Phi(u)| <= tol at every grid point u > 0.
CheckReport verify_cphi_identity(const ErrorFunction& psi, const ErrorFunction& phi,
                                 const Grid& grid, const QuadratureSpec& quad, double tol);

/// Hypothesis screens; throw HypothesisError when the screening grid finds a
/// violation. `range` bounds the argument values the caller will use.
void require_subadditive_nondecreasing(const ErrorFunction& phi, double range,
                                       double tol = 1e-9);
void require_absolutely_subadditive(const ErrorFunction& phi, double range,
                                    bool require_zero_at_zero, double tol = 1e-9);

}  // namespace phimon
