#include "phimon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace phimon {

namespace {

std::vector<double> grid_values(const RealFunction& f, const Grid& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.points()[i]);
    return v;
}

void require_diameter_within(const ErrorFunction& phi, const Grid& grid) {
    if (!(grid.span() < phi.domain_length())) {
        throw DomainError("grid diameter reaches beyond the error-function domain");
    }
}

double screen_range(const ErrorFunction& phi, const Interval& domain, double horizon) {
    double range = domain.finite() ? domain.length() : horizon;
    if (std::isfinite(phi.domain_length())) {
        range = std::min(range, phi.domain_length());
    }
    return range;
}

}  // namespace

// -------------------------------------------------------------- pair checks

CheckReport check_phi_monotone(const RealFunction& f, const ErrorFunction& phi,
                               const Grid& grid, double tol) {
    require_diameter_within(phi, grid);
    const auto& g = grid.points();
    std::vector<double> fv = grid_values(f, grid);
    CheckAccumulator acc(tol);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i; j < g.size(); ++j) {
            acc.add(g[i], g[j], fv[j] + phi(g[j] - g[i]) - fv[i]);
        }
    }
    return acc.finish();
}

CheckReport check_phi_holder(const RealFunction& f, const ErrorFunction& phi,
                             const Grid& grid, double tol) {
    require_diameter_within(phi, grid);
    const auto& g = grid.points();
    std::vector<double> fv = grid_values(f, grid);
    CheckAccumulator acc(tol);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i; j < g.size(); ++j) {
            acc.add(g[i], g[j], phi(g[j] - g[i]) - std::abs(fv[i] - fv[j]));
        }
    }
    return acc.finish();
}

// ------------------------------------------------------------------- blocks

namespace {

void screen_nondecreasing(const RealFunction& h, const BlockScreen& screen) {
    double margin = (h.domain().finite() ? h.domain().length() : 10.0) / 1000.0;
    Grid grid = make_grid(h.domain(), screen.grid_n, margin);
    std::vector<double> hv = grid_values(h, grid);
    for (std::size_t i = 0; i + 1 < hv.size(); ++i) {
        if (hv[i + 1] - hv[i] < -screen.tol) {
            throw HypothesisError("block input is decreasing on the screening grid");
        }
    }
}

}  // namespace

RealFunction build_lower_block(const RealFunction& h, double p, const ErrorFunction& phi,
                               const BlockScreen& screen) {
    if (!h.domain().contains(p)) throw HypothesisError("block point must lie in the domain");
    screen_nondecreasing(h, screen);
    double hp = h(p);
    if (!std::isfinite(hp)) throw HypothesisError("block value at p must be finite");
    RealFunction base = h;
    ErrorFunction decay = phi;
    std::vector<double> knots = h.knots();
    knots.push_back(p);
    return RealFunction::from_callable(
        [base, decay, p, hp](double x) { return x <= p ? base(x) : hp - decay(x - p); },
        h.domain(), std::move(knots));
}

RealFunction build_upper_block(const RealFunction& h, double p, const ErrorFunction& phi,
                               const BlockScreen& screen) {
    if (!h.domain().contains(p)) throw HypothesisError("block point must lie in the domain");
    screen_nondecreasing(h, screen);
    double hp = h(p);
    if (!std::isfinite(hp)) throw HypothesisError("block value at p must be finite");
    RealFunction base = h;
    ErrorFunction growth = phi;
    std::vector<double> knots = h.knots();
    knots.push_back(p);
    return RealFunction::from_callable(
        [base, growth, p, hp](double x) { return x < p ? hp + growth(p - x) : base(x); },
        h.domain(), std::move(knots));
}

// ----------------------------------------------------------- interpolation

CheckReport can_interpolate_monotone(const RealFunction& f, double p, InterpolationSide side,
                                     const ErrorFunction& phi, const Grid& grid, double tol,
                                     int resolution) {
    if (!grid.contains_point(p)) {
        throw HypothesisError("interpolation point must be a grid point");
    }
    require_diameter_within(phi, grid);
    require_subadditive_nondecreasing(phi, grid.span(), tol);
    CheckAccumulator acc(tol);
    double fp = f(p);
    for (double x : grid.points()) {
        if (side == InterpolationSide::below) {
            if (x <= p) {
                acc.add_condition(x, p, inf_over(f, x, p, resolution).is_finite());
            } else {
                acc.add(x, p, f(x) + phi(x - p) - fp);
            }
        } else {
            if (x < p) {
                acc.add(x, p, fp + phi(p - x) - f(x));
            } else {
                acc.add_condition(p, x, sup_over(f, p, x, resolution).is_finite());
            }
        }
    }
    return acc.finish();
}

CheckReport can_interpolate_holder(const RealFunction& f, double p, InterpolationSide side,
                                   const ErrorFunction& phi, const Grid& grid, double tol) {
    if (!grid.contains_point(p)) {
        throw HypothesisError("interpolation point must be a grid point");
    }
    require_diameter_within(phi, grid);
    require_absolutely_subadditive(phi, grid.span(), /*require_zero_at_zero=*/true, tol);
    CheckAccumulator acc(tol);
    double fp = f(p);
    for (double x : grid.points()) {
        double step = phi(std::abs(x - p));
        if (side == InterpolationSide::below) {
            acc.add(x, p, f(x) + step - fp);
        } else {
            acc.add(x, p, fp + step - f(x));
        }
    }
    return acc.finish();
}

RealFunction phi_p_function(const ErrorFunction& phi, double p, Interval domain) {
    ErrorFunction e = phi;
    return RealFunction::from_callable([e, p](double x) { return e(std::abs(x - p)); },
                                       domain, {p});
}

RealFunction build_holder_interpolant(const RealFunction& f, double p, InterpolationSide side,
                                      const ErrorFunction& phi) {
    if (!f.domain().contains(p)) {
        throw HypothesisError("interpolation point must lie in the domain");
    }
    if (std::abs(phi(0.0)) > 1e-12) {
        throw HypothesisError("the error function must vanish at 0 to interpolate at p");
    }
    require_absolutely_subadditive(phi, screen_range(phi, f.domain(), 10.0), true);
    double fp = f(p);
    double sign = side == InterpolationSide::below ? -1.0 : 1.0;
    ErrorFunction e = phi;
    return RealFunction::from_callable(
        [e, p, fp, sign](double x) { return fp + sign * e(std::abs(x - p)); }, f.domain(),
        {p});
}

// ---------------------------------------------------------------- two-point

TwoPointFunction::TwoPointFunction(RealFunction source, int resolution)
    : source_(std::move(source)), resolution_(resolution) {
    if (resolution_ < 2) throw HypothesisError("two-point resolution must be >= 2");
}

double TwoPointFunction::h_at(double x, double y) const {
    if (cache_) {
        const auto& pts = cache_->points;
        auto i = std::lower_bound(pts.begin(), pts.end(), x);
        auto j = std::lower_bound(pts.begin(), pts.end(), y);
        if (i != pts.end() && *i == x && j != pts.end() && *j == y) {
            std::size_t n = pts.size();
            return cache_->values[static_cast<std::size_t>(i - pts.begin()) * n +
                                  static_cast<std::size_t>(j - pts.begin())];
        }
    }
    if (x < y) return inf_over(source_, x, y, resolution_).value();
    if (x > y) return sup_over(source_, y, x, resolution_).value();
    return source_(x);
}

void TwoPointFunction::precompute(const Grid& grid) {
    if (grid.size() > 201) return;  // dense cache is for desk-scale grids
    auto cache = std::make_shared<Cache>();
    cache->points = grid.points();
    std::size_t n = cache->points.size();
    cache->values.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double x = cache->points[i];
            double y = cache->points[j];
            double v;
            if (x < y)
                v = inf_over(source_, x, y, resolution_).value();
            else if (x > y)
                v = sup_over(source_, y, x, resolution_).value();
            else
                v = source_(x);
            cache->values[i * n + j] = v;
        }
    }
    cache_ = std::move(cache);
}

RealFunction TwoPointFunction::section(double p) const {
    TwoPointFunction copy = *this;
    std::vector<double> knots = source_.knots();
    knots.push_back(p);
    return RealFunction::from_callable([copy, p](double x) { return copy.h_at(x, p); },
                                       source_.domain(), std::move(knots));
}

TwoPointFunction build_two_point(RealFunction f, int resolution) {
    return TwoPointFunction(std::move(f), resolution);
}

// --------------------------------------------------- functional equations

namespace {

std::vector<double> two_point_matrix(const TwoPointFn& H, const Grid& grid) {
    const auto& g = grid.points();
    std::size_t n = g.size();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = H(g[i], g[j]);
    }
    return m;
}

}  // namespace

CheckReport check_feh_equations(const TwoPointFn& H, const Grid& grid, double tol) {
    const auto& g = grid.points();
    std::size_t n = g.size();
    std::vector<double> m = two_point_matrix(H, grid);
    CheckAccumulator acc(tol);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            for (std::size_t k = j; k < n; ++k) {
                double r1 = std::abs(std::min(m[i * n + j], m[j * n + k]) - m[i * n + k]);
                double r2 = std::abs(std::max(m[k * n + j], m[j * n + i]) - m[k * n + i]);
                acc.add(g[i], g[k], -std::max(r1, r2));
            }
        }
    }
    return acc.finish();
}

CheckReport check_feh_equations(const TwoPointFunction& H, const Grid& grid, double tol) {
    return check_feh_equations([&H](double x, double y) { return H.h_at(x, y); }, grid, tol);
}

CheckReport check_diagonal_bounds(const TwoPointFn& H, const Grid& grid,
                                  bool continuous_diagonal, double tol) {
    const auto& g = grid.points();
    std::size_t n = g.size();
    std::vector<double> m = two_point_matrix(H, grid);
    // equality at the diagonal can only be resolved up to the grid spacing
    double tol_eq = std::max(tol, grid.mean_spacing());
    CheckAccumulator acc(continuous_diagonal ? tol_eq : tol);
    for (std::size_t i = 0; i < n; ++i) {
        double diag_min = m[i * n + i];
        double diag_max = diag_min;
        for (std::size_t j = i; j < n; ++j) {
            diag_min = std::min(diag_min, m[j * n + j]);
            diag_max = std::max(diag_max, m[j * n + j]);
            double below = diag_min - m[i * n + j];
            double above = m[j * n + i] - diag_max;
            if (continuous_diagonal) {
                acc.add(g[i], g[j], -std::max(std::abs(below), std::abs(above)));
            } else {
                acc.add(g[i], g[j], std::min(below, above));
            }
        }
    }
    return acc.finish();
}

CheckReport check_diagonal_bounds(const TwoPointFunction& H, const Grid& grid,
                                  bool continuous_diagonal, double tol) {
    return check_diagonal_bounds([&H](double x, double y) { return H.h_at(x, y); }, grid,
                                 continuous_diagonal, tol);
}

CheckReport check_feg_equations(const TwoPointFn& G, const Grid& grid, double tol) {
    return check_feh_equations([&G](double x, double y) { return -G(x, y); }, grid, tol);
}

CheckReport check_feg_equations(const TwoPointFunction& G, const Grid& grid, double tol) {
    return check_feg_equations([&G](double x, double y) { return G.h_at(x, y); }, grid, tol);
}

// ------------------------------------------------------- superadditivity

std::pair<CheckReport, CheckReport> superadditive_equivalence_parts(const RealFunction& f,
                                                                    const Grid& grid,
                                                                    double tol) {
    if (f.domain().lo() != 0.0) {
        throw HypothesisError("superadditivity equivalence needs a domain with inf 0");
    }
    const auto& g = grid.points();
    std::vector<double> fv = grid_values(f, grid);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (fv[i] > tol) {
            throw HypothesisError("superadditivity equivalence needs a nonpositive function");
        }
    }

    CheckAccumulator super(tol);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i; j < g.size(); ++j) {
            double sum = g[i] + g[j];
            if (sum > grid.back()) continue;
            super.add(g[i], g[j], f(sum) - fv[i] - fv[j]);
        }
    }

    // Phi := -f extended by 0 at the origin, the error function of the
    // (-f)-monotonicity side.
    RealFunction base = f;
    RealFunction neg_f = RealFunction::from_callable(
        [base](double t) { return t <= 0.0 ? 0.0 : -base(t); },
        Interval(-1.0, f.domain().hi()), f.knots());
    ErrorFunction phi = ErrorFunction::tabulated(neg_f, f.domain().hi());
    CheckReport mono = check_phi_monotone(f, phi, grid, tol);
    return {super.finish(), mono};
}

CheckReport check_superadditive_equivalence(const RealFunction& f, const Grid& grid,
                                            double tol) {
    auto [super, mono] = superadditive_equivalence_parts(f, grid, tol);
    bool agree = super.holds() == mono.holds();
    CheckReport report;
    report.tolerance = tol;
    report.pairs_checked = super.pairs_checked + mono.pairs_checked;
    if (agree) {
        report.verdict = Verdict::holds;
        report.worst_margin = 0.0;
    } else {
        // categorical disagreement margin; the witness names the side that failed
        report.verdict = Verdict::fails;
        report.worst_margin = -1.0;
        const CheckReport& failing = super.holds() ? mono : super;
        Witness w = failing.witness.value_or(Witness{grid.front(), grid.back(), 0.0});
        report.witness = Witness{w.x, w.y, report.worst_margin};
    }
    return report;
}

}  // namespace phimon
