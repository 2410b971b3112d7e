#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "phimon/error_function.hpp"

using namespace phimon;

namespace {

const QuadratureSpec kQuad{};

ErrorFunction tabulated_expr(const char* expr, double length) {
    return ErrorFunction::tabulated(
        RealFunction::from_expression(expr, Interval(-1.0, length)), length);
}

}  // namespace

TEST_CASE("power evaluation and range errors") {
    ErrorFunction phi = ErrorFunction::power(1.0, 0.5);
    CHECK(phi(4.0) == 2.0);
    CHECK(phi(0.0) == 0.0);
    CHECK_THROWS_AS(phi(-0.1), DomainError);

    ErrorFunction bounded = tabulated_expr("1 - x", 1.0);
    CHECK(bounded(0.0) == 1.0);
    CHECK_THROWS_AS(bounded(1.0), DomainError);

    CHECK_THROWS_AS(ErrorFunction::power(-1.0, 1.0), HypothesisError);
    CHECK_THROWS_AS(ErrorFunction::power(1.0, 0.0), HypothesisError);
}

TEST_CASE("transformed bodies evaluate to c(p+1)/p t^p for power bases") {
    // c=1, p=1: coefficient (1+1)/1 = 2, so the image of t at 3 is 6
    ErrorFunction t1 = ErrorFunction::transformed(ErrorFunction::power(1.0, 1.0));
    CHECK(t1(3.0) == doctest::Approx(6.0).epsilon(1e-14));
    // c=1, p=1/2: coefficient 1.5/0.5 = 3, so 3*sqrt(4) = 6
    ErrorFunction t2 = ErrorFunction::transformed(ErrorFunction::power(1.0, 0.5));
    CHECK(t2(4.0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(t2(0.0) == 0.0);
}

TEST_CASE("transform of a power body is exactly the closed-form power") {
    ErrorFunction a = transform_psi_to_phi(ErrorFunction::power(1.0, 1.0));
    CHECK(a.kind() == ErrorBodyKind::power);
    CHECK(a.power_coefficient() == 2.0);
    CHECK(a.power_exponent() == 1.0);

    ErrorFunction b = transform_psi_to_phi(ErrorFunction::power(1.0, 0.5));
    CHECK(b.power_coefficient() == 3.0);
    CHECK(b.power_exponent() == 0.5);

    ErrorFunction c = transform_psi_to_phi(ErrorFunction::power(0.0, 1.0));
    CHECK(c.power_coefficient() == 0.0);
    CHECK(c.power_exponent() == 1.0);
}

TEST_CASE("analytic transform agrees with the forced-quadrature path") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> c_d(0.1, 2.0);
    std::uniform_real_distribution<double> p_d(0.3, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        double c = c_d(rng);
        double p = p_d(rng);
        ErrorFunction analytic = transform_psi_to_phi(ErrorFunction::power(c, p));
        ErrorFunction quadrature =
            ErrorFunction::transformed(ErrorFunction::power(c, p), kQuad, true);
        for (double t : {0.2, 0.7, 1.3}) {
            CHECK(std::abs(analytic(t) - quadrature(t)) <= 1e-6);
        }
    }
}

TEST_CASE("transformed evaluation memoizes safely across threads") {
    ErrorFunction phi = ErrorFunction::transformed(ErrorFunction::power(1.0, 0.5), kQuad, true);
    double expected = phi(0.8);
    std::vector<std::thread> workers;
    std::vector<double> results(4);
    for (int i = 0; i < 4; ++i) {
        workers.emplace_back([&phi, &results, i] { results[std::size_t(i)] = phi(0.8); });
    }
    for (auto& w : workers) w.join();
    for (double r : results) CHECK(r == expected);
}

TEST_CASE("the integrability screen rejects non-vanishing tabulated inputs") {
    // constant 1 near zero has a flat log-log slope, so Psi(t)/t is not integrable
    CHECK_THROWS_AS(transform_psi_to_phi(tabulated_expr("1", 1.0)), HypothesisError);
    // nonnegativity screen
    CHECK_THROWS_AS(transform_psi_to_phi(tabulated_expr("-1 + x", 1.0)), HypothesisError);
    // a root-like input passes
    CHECK_NOTHROW(transform_psi_to_phi(tabulated_expr("abs(x)^0.7", 1.0)));
    // the zero function passes as well
    CHECK_NOTHROW(transform_psi_to_phi(tabulated_expr("0", 1.0)));
}

TEST_CASE("nondecreasing check") {
    Grid grid = make_error_grid(5.0, 21, 0.1);
    CHECK(check_nondecreasing(ErrorFunction::power(1.0, 1.0), grid, 1e-9).holds());
    CHECK(check_nondecreasing(ErrorFunction::power(0.0, 1.0), grid, 1e-9).holds());

    Grid unit = make_error_grid(1.0, 11, 0.1);
    CheckReport falling = check_nondecreasing(tabulated_expr("1 - x", 1.0), unit, 1e-9);
    CHECK_FALSE(falling.holds());
    REQUIRE(falling.witness.has_value());
    CHECK(falling.witness->x == 0.0);
    CHECK(falling.witness->y == doctest::Approx(0.9));
    CHECK(falling.worst_margin == doctest::Approx(-0.9));
}

TEST_CASE("subadditivity check") {
    Grid grid = make_error_grid(4.0, 17, 0.25);
    CHECK(check_subadditive(ErrorFunction::power(1.0, 0.5), grid, 1e-9).holds());

    // linear maps are additive: worst slack is exactly zero
    CheckReport linear = check_subadditive(ErrorFunction::power(2.0, 1.0), grid, 1e-9);
    CHECK(linear.holds());
    CHECK(linear.worst_margin == doctest::Approx(0.0));

    // t^2 on [0, 2): at u = v = 0.9 the slack is 1.62 - 3.24 = -1.62
    Grid coarse = make_error_grid(2.0, 3, 0.2);
    CheckReport quad = check_subadditive(tabulated_expr("x^2", 2.0), coarse, 1e-9);
    CHECK_FALSE(quad.holds());
    REQUIRE(quad.witness.has_value());
    CHECK(quad.witness->x == doctest::Approx(0.9));
    CHECK(quad.witness->y == doctest::Approx(0.9));
    CHECK(quad.worst_margin == doctest::Approx(-1.62));
}

TEST_CASE("absolute subadditivity check") {
    Grid grid = make_error_grid(4.0, 17, 0.25);
    CHECK(check_absolutely_subadditive(ErrorFunction::power(1.0, 0.5), grid, 1e-9).holds());
    CHECK(check_absolutely_subadditive(ErrorFunction::power(1.0, 1.0), grid, 1e-9).holds());

    Grid coarse = make_error_grid(2.0, 3, 0.2);
    CheckReport quad = check_absolutely_subadditive(tabulated_expr("x^2", 2.0), coarse, 1e-9);
    CHECK_FALSE(quad.holds());
    REQUIRE(quad.witness.has_value());
    // same witness as plain subadditivity, with positive signs
    CHECK(quad.witness->x == doctest::Approx(0.9));
    CHECK(quad.witness->y == doctest::Approx(0.9));
}

TEST_CASE("absolute subadditivity implies plain subadditivity on the same grid") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> c_d(0.0, 2.0);
    std::uniform_real_distribution<double> p_d(0.1, 1.0);
    Grid grid = make_error_grid(3.0, 13, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
        ErrorFunction phi = trial % 3 == 0 ? tabulated_expr(trial % 6 ? "x^2" : "abs(x)", 3.0)
                                           : ErrorFunction::power(c_d(rng), p_d(rng));
        if (check_absolutely_subadditive(phi, grid, 1e-9).holds()) {
            CHECK(check_subadditive(phi, grid, 1e-9).holds());
        }
    }
}

TEST_CASE("powers with exponent at most one are nondecreasing and subadditive") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> c_d(0.0, 2.0);
    std::uniform_real_distribution<double> p_d(0.05, 1.0);
    Grid grid = make_error_grid(2.0, 15, 0.1);
    for (int trial = 0; trial < 25; ++trial) {
        ErrorFunction phi = ErrorFunction::power(c_d(rng), p_d(rng));
        CHECK(check_nondecreasing(phi, grid, 1e-9).holds());
        CHECK(check_subadditive(phi, grid, 1e-9).holds());
    }
}

TEST_CASE("integral identity for transformed pairs") {
    // int_0^1 2t dt = 1, so Psi(1) + 1/1 = 2 = Phi(1) with zero residual
    Grid one = Grid(Interval(0.0, 2.0), {0.5, 1.0}, 0.0);
    CheckReport ok = verify_cphi_identity(ErrorFunction::power(1.0, 1.0),
                                          ErrorFunction::power(2.0, 1.0), one, kQuad, 1e-12);
    CHECK(ok.holds());

    // oracle: int_0^4 3 sqrt(t) dt = 2 * 4^{3/2} = 16, so 2 + 16/4 = 6 = Phi(4)
    Grid four = Grid(Interval(0.0, 5.0), {1.0, 4.0}, 0.0);
    CheckReport sqrt_ok = verify_cphi_identity(ErrorFunction::power(1.0, 0.5),
                                               ErrorFunction::power(3.0, 0.5), four, kQuad,
                                               1e-12);
    CHECK(sqrt_ok.holds());
    double quad_integral = integrate_callable(
        [](double t) { return 3.0 * std::sqrt(t); }, 0.0, 4.0, {}, kQuad);
    CHECK(quad_integral == doctest::Approx(16.0).epsilon(1e-8));

    // an unrelated pair fails: u + u/2 differs from u by u/2 at every u > 0
    Grid fail_grid = make_grid(Interval(0.0, 1.0), 9, 0.1);
    CheckReport bad = verify_cphi_identity(ErrorFunction::power(1.0, 1.0),
                                           ErrorFunction::power(1.0, 1.0), fail_grid, kQuad,
                                           1e-9);
    CHECK_FALSE(bad.holds());
    CHECK(bad.worst_margin == doctest::Approx(-0.45).epsilon(1e-9));
}

TEST_CASE("transform round-trip satisfies the integral identity") {
    Grid grid = make_grid(Interval(0.0, 1.0), 8, 0.05);
    // tabulated input: Psi(t) = sqrt(t), whose image is 3 sqrt(t)
    ErrorFunction psi = tabulated_expr("sqrt(abs(x))", 1.0);
    ErrorFunction phi = transform_psi_to_phi(psi, kQuad);
    CHECK(phi.kind() == ErrorBodyKind::transformed);
    CHECK(verify_cphi_identity(psi, phi, grid, kQuad, 1e-4).holds());
    CHECK(phi(0.81) == doctest::Approx(3.0 * 0.9).epsilon(1e-6));

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> c_d(0.1, 2.0);
    std::uniform_real_distribution<double> p_d(0.25, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        ErrorFunction psi_p = ErrorFunction::power(c_d(rng), p_d(rng));
        CHECK(verify_cphi_identity(psi_p, transform_psi_to_phi(psi_p), grid, kQuad, 1e-4)
                  .holds());
    }
}

TEST_CASE("error integrals and averages") {
    ErrorFunction phi = ErrorFunction::power(1.0, 1.0);
    CHECK(integrate_error(phi, 0.0, 1.0, kQuad) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(error_average(phi, 0.5, 0.5, kQuad, false) == 0.5);
    // averaged over the hull of {-1, 2} through |.|: (0.5 + 2)/3
    CHECK(error_average(phi, -1.0, 2.0, kQuad, true) ==
          doctest::Approx(5.0 / 6.0).epsilon(1e-9));
    CHECK_THROWS_AS(error_average(phi, -1.0, 2.0, kQuad, false), DomainError);

    ErrorFunction bounded = tabulated_expr("x^2", 2.0);
    CHECK(integrate_error(bounded, 0.0, 1.0, kQuad) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK_THROWS_AS(integrate_error(bounded, 0.0, 3.0, kQuad), DomainError);
}

TEST_CASE("hypothesis screens") {
    CHECK_NOTHROW(require_subadditive_nondecreasing(ErrorFunction::power(1.0, 0.5), 2.0));
    CHECK_THROWS_AS(require_subadditive_nondecreasing(tabulated_expr("x^2", 2.0), 1.9),
                    HypothesisError);
    CHECK_THROWS_AS(require_subadditive_nondecreasing(tabulated_expr("1 - x", 1.0), 0.9),
                    HypothesisError);
    CHECK_NOTHROW(require_absolutely_subadditive(ErrorFunction::power(1.0, 1.0), 2.0, true));
    // fails the zero-at-zero requirement
    CHECK_THROWS_AS(require_absolutely_subadditive(tabulated_expr("1", 1.0), 0.9, true),
                    HypothesisError);
}
