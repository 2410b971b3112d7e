// inequalities.hpp - Hermite-Hadamard and Ostrowski-type integral bounds for
// Phi-monotone / Phi-Hoelder functions, their sharpness witnesses, converse
// premise checks and the averaging-operator iteration.
#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "phimon/analysis.hpp"
#include "phimon/core.hpp"
#include "phimon/error_function.hpp"
#include "phimon/numerics.hpp"

namespace phimon {

/// Comparison of a proved bound against the value achieved by an extremal
/// witness; sharpness claims require |gap| within the declared tolerance.
struct BoundCertificate {
    enum class Kind { hh_lower, hh_upper, ostrowski, ghh, ghh_holder };

    Kind kind;
    double bound_value = 0.0;
    double achieved_value = 0.0;
    double gap = 0.0;  // bound_value - achieved_value
    double tolerance = 0.0;
    std::optional<RealFunction> witness_function;

    bool sharp() const { return std::abs(gap) <= tolerance; }
};

enum class GhhVariant { monotone, holder };
enum class ConverseVariant { left, right, holder_left, holder_right };

/// A(f,<u,v>) <= A(f,<w,z>) + A(Phi,<w-u,z-v>) for the monotone variant
/// (requires u <= w and v <= z); |A(f,<u,v>) - A(f,<w,z>)| <= A(Phi o |.|, .)
/// for the Hoelder variant.
CheckReport check_generalized_hh(const RealFunction& f, const ErrorFunction& phi, double u,
                                 double v, double w, double z, const QuadratureSpec& quad,
                                 double tol, GhhVariant variant = GhhVariant::monotone);

struct HhSlacks {
    double lower = 0.0;  // average - (f(x) - B)
    double upper = 0.0;  // (f(y) + B) - average, with B = (1/(y-x)) int_0^{y-x} Phi
};

/// Both Hermite-Hadamard slacks at (x, y); f is re-screened for
/// Phi-monotonicity on a light window grid first.
HhSlacks hh_bounds(const RealFunction& f, const ErrorFunction& phi, double x, double y,
                   const QuadratureSpec& quad, double screen_tol = 1e-9,
                   std::size_t screen_n = 33);

/// Certificates for the lower and upper bound witnesses: the frozen-decay
/// block achieving f(x) - average = B and the mirrored block achieving
/// average - f(y) = B.
std::pair<BoundCertificate, BoundCertificate> hh_sharpness(
    const ErrorFunction& phi, double x, double y, const QuadratureSpec& quad, double tol,
    std::optional<Interval> domain = std::nullopt);

/// |f(p) - average| <= (1/(y-x)) (int_0^{p-x} Phi + int_0^{y-p} Phi);
/// f is re-screened for the Hoelder property on a window grid.
CheckReport ostrowski_bound(const RealFunction& f, const ErrorFunction& phi, double x,
                            double y, double p, const QuadratureSpec& quad, double tol,
                            std::size_t screen_n = 33);

/// Certificate for the witness Phi(|.-p|) achieving the Ostrowski bound.
BoundCertificate ostrowski_sharpness(const ErrorFunction& phi, double x, double y, double p,
                                     const QuadratureSpec& quad, double tol,
                                     std::optional<Interval> domain = std::nullopt);

struct PowerCaseBounds {
    double hh = 0.0;         // c/(p+1) * (y-x)^p
    double ostrowski = 0.0;  // c/(p+1) * ((point-x)^p + (y-point)^p)
};

/// Closed forms of both bounds for Phi(t) = c t^p with 0 < p <= 1.
PowerCaseBounds power_case_bounds(double c, double p_exp, double x, double y, double point);

/// The averaged premise of the converse implications, over all grid pairs
/// u < v: left:  f(u) <= A(f,[u,v]) + Psi(v-u)
///        right: A(f,[u,v]) <= f(v) + Psi(v-u)
/// and the Hoelder variants with |.| around the deviation.
CheckReport check_converse_premise(const RealFunction& f, const ErrorFunction& psi,
                                   ConverseVariant variant, const Grid& grid,
                                   const QuadratureSpec& quad, double tol);

/// The conclusion the premise buys: Phi-monotonicity (or the Hoelder
/// property) against the transform of Psi. Power inputs with exponent > 1
/// are tested against the zero error function (plain increasingness). A
/// failing verdict is re-checked once on a refined grid.
CheckReport check_converse_conclusion(const RealFunction& f, const ErrorFunction& psi,
                                      ConverseVariant variant, const Grid& grid,
                                      const QuadratureSpec& quad, double tol);

/// Iterates of (Tg)(u) = A(g,[u,y]) + Psi(y-u) (with Tg(y) = g(y)), each
/// stored as a sampled table on [x, y]. Aborts when any value passes the
/// blow-up guard.
std::vector<RealFunction> iterate_T(const RealFunction& f, const ErrorFunction& psi,
                                    double x, double y, int n, const QuadratureSpec& quad,
                                    int samples = 257, double blowup_limit = 1e6);

}  // namespace phimon
