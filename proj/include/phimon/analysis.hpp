// analysis.hpp - Phi-monotone / Phi-Hoelder verification, building-block
// constructions, interpolation criteria, the two-point function H with its
// min/max functional equations, and the superadditivity equivalence.
#pragma once

#include <functional>
#include <memory>

#include "phimon/core.hpp"
#include "phimon/error_function.hpp"
#include "phimon/numerics.hpp"

namespace phimon {

enum class InterpolationSide { below, above };

/// Screening-grid configuration for the block builders.
struct BlockScreen {
    std::size_t grid_n = 101;
    double tol = 1e-9;
};

/// H(x, y) = inf of f over [x, y] for x < y, f(x) for x = y, and sup of f
/// over [y, x] for x > y. Values are computed on demand at the stored
/// extremum resolution; an optional dense cache may be precomputed over a
/// grid (single-threaded build, then safe for concurrent reads).
class TwoPointFunction {
public:
    explicit TwoPointFunction(RealFunction source, int resolution = 201);

    double h_at(double x, double y) const;

    const RealFunction& source() const { return source_; }
    int resolution() const { return resolution_; }

    /// Dense H values over the grid (skipped for grids above 201 points).
    void precompute(const Grid& grid);

    /// The one-variable section h = H(., p); nondecreasing by construction.
    RealFunction section(double p) const;

private:
    struct Cache {
        std::vector<double> points;
        std::vector<double> values;  // row-major points.size() x points.size()
    };

    RealFunction source_;
    int resolution_;
    std::shared_ptr<const Cache> cache_;
};

using TwoPointFn = std::function<double(double, double)>;

/// f(x) <= f(y) + Phi(y-x) + tol for all grid pairs x <= y.
CheckReport check_phi_monotone(const RealFunction& f, const ErrorFunction& phi,
                               const Grid& grid, double tol);

/// |f(x) - f(y)| <= Phi(|x-y|) + tol for all grid pairs.
CheckReport check_phi_holder(const RealFunction& f, const ErrorFunction& phi,
                             const Grid& grid, double tol);

/// The lower building block: h on (-inf, p], then h(p) - Phi(x-p). The input
/// h is screened for nondecreasingness on a uniform grid.
RealFunction build_lower_block(const RealFunction& h, double p, const ErrorFunction& phi,
                               const BlockScreen& screen = {});

/// The upper building block: h(p) + Phi(p-x) left of p, then h.
RealFunction build_upper_block(const RealFunction& h, double p, const ErrorFunction& phi,
                               const BlockScreen& screen = {});

/// Feasibility of touching f at p from below/above with a Phi-monotone
/// function: finite one-sided extrema plus the pointwise slack conditions.
CheckReport can_interpolate_monotone(const RealFunction& f, double p, InterpolationSide side,
                                     const ErrorFunction& phi, const Grid& grid, double tol,
                                     int resolution = 201);

/// Feasibility of touching f at p from below/above with a Phi-Hoelder
/// function: f(p) <= f(x) + Phi(|x-p|) (below) or its mirror (above).
CheckReport can_interpolate_holder(const RealFunction& f, double p, InterpolationSide side,
                                   const ErrorFunction& phi, const Grid& grid, double tol);

/// The Hoelder interpolant f(p) -/+ Phi(|.-p|); requires Phi(0) = 0 and an
/// absolutely subadditive Phi.
RealFunction build_holder_interpolant(const RealFunction& f, double p, InterpolationSide side,
                                      const ErrorFunction& phi);

/// Phi(|.-p|) as a function on `domain` with a knot at p.
RealFunction phi_p_function(const ErrorFunction& phi, double p, Interval domain);

TwoPointFunction build_two_point(RealFunction f, int resolution = 201);

/// min(H(x,y), H(y,z)) = H(x,z) and max(H(z,y), H(y,x)) = H(z,x) over all
/// grid triples x <= y <= z, within tol.
CheckReport check_feh_equations(const TwoPointFn& H, const Grid& grid, double tol);
CheckReport check_feh_equations(const TwoPointFunction& H, const Grid& grid, double tol);

/// H(x,y) <= min of the diagonal over [x,y] and H(y,x) >= its max, for grid
/// pairs x <= y. With continuous_diagonal set, equality is checked instead
/// at a tolerance coarsened by the grid spacing.
CheckReport check_diagonal_bounds(const TwoPointFn& H, const Grid& grid,
                                  bool continuous_diagonal, double tol);
CheckReport check_diagonal_bounds(const TwoPointFunction& H, const Grid& grid,
                                  bool continuous_diagonal, double tol);

/// The mirrored equations for G = -H: max(G(x,y), G(y,z)) = G(x,z) and
/// min(G(z,y), G(y,x)) = G(z,x).
CheckReport check_feg_equations(const TwoPointFn& G, const Grid& grid, double tol);
CheckReport check_feg_equations(const TwoPointFunction& G, const Grid& grid, double tol);

/// Superadditivity of a nonpositive f on a domain with left endpoint 0
/// agrees with (-f)-monotonicity; holds iff the two verdicts agree.
CheckReport check_superadditive_equivalence(const RealFunction& f, const Grid& grid,
                                            double tol);

/// The two sub-verdicts behind the equivalence: (superadditivity,
/// (-f)-monotonicity).
std::pair<CheckReport, CheckReport> superadditive_equivalence_parts(const RealFunction& f,
                                                                    const Grid& grid,
                                                                    double tol);

}  // namespace phimon
