#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "phimon/core.hpp"

using namespace phimon;

TEST_CASE("interval invariants") {
    Interval iv(0.0, 1.0);
    CHECK(iv.length() == 1.0);
    CHECK(iv.contains(0.5));
    CHECK_FALSE(iv.contains(0.0));
    CHECK_FALSE(iv.contains(1.0));
    CHECK_THROWS_AS(Interval(1.0, 1.0), HypothesisError);
    CHECK_THROWS_AS(Interval(2.0, 1.0), HypothesisError);

    Interval unbounded(0.0, std::numeric_limits<double>::infinity());
    CHECK_FALSE(unbounded.finite());
    CHECK(unbounded.length() == std::numeric_limits<double>::infinity());
    CHECK(unbounded.contains(1e12));
}

TEST_CASE("make_grid equal spacing examples") {
    Grid g1 = make_grid(Interval(0.0, 1.0), 3, 0.25);
    CHECK(g1.points() == std::vector<double>{0.25, 0.5, 0.75});

    Grid g2 = make_grid(Interval(0.0, 4.0), 2, 1.0);
    CHECK(g2.points() == std::vector<double>{1.0, 3.0});

    // unbounded interval truncated at the horizon: spacing (10-1)/4 = 2.25
    Grid g3 = make_grid(Interval(0.0, std::numeric_limits<double>::infinity()), 5, 1.0, 10.0);
    REQUIRE(g3.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(g3.points()[i] == doctest::Approx(1.0 + 2.25 * double(i)).epsilon(1e-14));
    }
    CHECK(g3.back() == 10.0);
}

TEST_CASE("make_grid rejects degenerate ranges") {
    CHECK_THROWS_AS(make_grid(Interval(0.0, 1.0), 3, 0.5), HypothesisError);
    CHECK_THROWS_AS(make_grid(Interval(0.0, 1.0), 1, 0.1), HypothesisError);
    CHECK_THROWS_AS(make_grid(Interval(0.0, 1.0), 3, 0.0), HypothesisError);
    // horizon below the clipped left endpoint
    CHECK_THROWS_AS(
        make_grid(Interval(5.0, std::numeric_limits<double>::infinity()), 3, 1.0, 4.0),
        HypothesisError);
}

TEST_CASE("grid spacing is constant to ulp scale") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> lo_d(-5.0, 5.0);
    std::uniform_real_distribution<double> len_d(0.1, 20.0);
    std::uniform_int_distribution<int> n_d(2, 400);
    for (int trial = 0; trial < 50; ++trial) {
        double lo = lo_d(rng);
        double len = len_d(rng);
        std::size_t n = static_cast<std::size_t>(n_d(rng));
        Grid g = make_grid(Interval(lo, lo + len), n, len / 1000.0);
        double h0 = g.mean_spacing();
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            double h = g.points()[i + 1] - g.points()[i];
            CHECK(std::abs(h - h0) <= 1e-12 * std::max(1.0, std::abs(h0) + std::abs(lo)));
        }
    }
}

TEST_CASE("error grids start at zero") {
    Grid g = make_error_grid(1.0, 11, 0.1);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(0.9));
    CHECK(g.size() == 11);
    CHECK(g.interval().lo() == 0.0);
    CHECK(g.interval().hi() == 1.0);
}

TEST_CASE("grid point membership and refinement") {
    Grid g = make_grid(Interval(0.0, 1.0), 11, 0.001);
    CHECK(g.contains_point(g.points()[5]));
    CHECK_FALSE(g.contains_point(0.123456));
    CHECK(g.nearest_point(0.52) == doctest::Approx(g.points()[5]).epsilon(1e-12));
    Grid fine = g.refined();
    CHECK(fine.size() == 21);
    CHECK(fine.front() == g.front());
    CHECK(fine.back() == g.back());
}

TEST_CASE("expression evaluation") {
    RealFunction sq = RealFunction::from_expression("x^2", Interval(0.0, 4.0));
    CHECK(sq(3.0) == 9.0);
    CHECK_THROWS_AS(sq(4.0), DomainError);
    CHECK_THROWS_AS(sq(-1.0), DomainError);

    RealFunction expr = RealFunction::from_expression("min(2*x, 1) + max(x - 1, 0)",
                                                      Interval(-10.0, 10.0));
    CHECK(expr(0.25) == doctest::Approx(0.5));
    CHECK(expr(3.0) == doctest::Approx(3.0));

    RealFunction neg_pow = RealFunction::from_expression("-x^2", Interval(-10.0, 10.0));
    CHECK(neg_pow(3.0) == -9.0);  // unary minus binds after ^
    RealFunction pw = RealFunction::from_expression("2^-3", Interval(-1.0, 1.0));
    CHECK(pw(0.0) == 0.125);

    RealFunction lg = RealFunction::from_expression("log(x)", Interval(-1.0, 1.0));
    CHECK_THROWS_AS(lg(-0.5), EvaluationError);
    RealFunction rt = RealFunction::from_expression("sqrt(x)", Interval(-1.0, 1.0));
    CHECK_THROWS_AS(rt(-0.5), EvaluationError);
    RealFunction dv = RealFunction::from_expression("1/x", Interval(-1.0, 1.0));
    CHECK_THROWS_AS(dv(0.0), EvaluationError);

    CHECK_THROWS_AS(RealFunction::from_expression("x +", Interval(0.0, 1.0)), ParseError);
    CHECK_THROWS_AS(RealFunction::from_expression("foo(x)", Interval(0.0, 1.0)), ParseError);
    CHECK_THROWS_AS(RealFunction::from_expression("x; rm", Interval(0.0, 1.0)), ParseError);
}

TEST_CASE("piecewise expressions expose their breakpoints as knots") {
    RealFunction f =
        RealFunction::from_expression("if(x < 0.5, x, 1 + x)", Interval(0.0, 1.0));
    REQUIRE(f.knots().size() == 1);
    CHECK(f.knots()[0] == 0.5);
    CHECK(f(0.25) == 0.25);
    CHECK(f(0.75) == doctest::Approx(1.75));
}

TEST_CASE("table interpolation rules") {
    Interval dom(0.0, 4.0);
    RealFunction lin = RealFunction::from_table({1.0, 2.0}, {0.0, 4.0}, InterpRule::linear, dom);
    CHECK(lin(1.5) == 2.0);
    RealFunction left =
        RealFunction::from_table({1.0, 2.0}, {0.0, 4.0}, InterpRule::left_step, dom);
    CHECK(left(1.5) == 0.0);
    RealFunction right =
        RealFunction::from_table({1.0, 2.0}, {0.0, 4.0}, InterpRule::right_step, dom);
    CHECK(right(1.5) == 4.0);
    CHECK(right(1.0) == 0.0);  // (x_i, x_{i+1}] takes the right sample

    // outside the sample hull the nearest sample extends the table
    CHECK(lin(0.5) == 0.0);
    CHECK(lin(3.5) == 4.0);

    CHECK(lin.is_sampled_table());
    CHECK_THROWS_AS(
        RealFunction::from_table({2.0, 1.0}, {0.0, 1.0}, InterpRule::linear, dom),
        HypothesisError);
    CHECK_THROWS_AS(
        RealFunction::from_table({0.0, 1.0}, {0.0, 1.0}, InterpRule::linear, dom),
        HypothesisError);  // sample on the open boundary
}

TEST_CASE("linear tables are exact at samples and monotone between them") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> y_d(-3.0, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> xs, ys;
        for (int i = 0; i < 12; ++i) {
            xs.push_back(0.5 + i * 0.25);
            ys.push_back(y_d(rng));
        }
        RealFunction f = RealFunction::from_table(xs, ys, InterpRule::linear,
                                                  Interval(0.0, 5.0));
        for (std::size_t i = 0; i < xs.size(); ++i) CHECK(f(xs[i]) == ys[i]);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            double sign = ys[i + 1] >= ys[i] ? 1.0 : -1.0;
            double prev = ys[i];
            for (int k = 1; k <= 8; ++k) {
                double x = xs[i] + (xs[i + 1] - xs[i]) * k / 9.0;
                double v = f(x);
                CHECK(sign * (v - prev) >= -1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("extended real ordering and extremes agree with brute force") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> v_d(-100.0, 100.0);
    std::uniform_int_distribution<int> kind_d(0, 9);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ExtendedReal> xs;
        std::size_t n = 1 + static_cast<std::size_t>(trial % 9);
        for (std::size_t i = 0; i < n; ++i) {
            int k = kind_d(rng);
            if (k == 0)
                xs.push_back(ExtendedReal::neg_inf());
            else if (k == 1)
                xs.push_back(ExtendedReal::pos_inf());
            else
                xs.push_back(ExtendedReal(v_d(rng)));
        }
        ExtendedReal lo = xs.front();
        ExtendedReal hi = xs.front();
        for (const auto& x : xs) {
            if (x < lo) lo = x;
            if (x > hi) hi = x;
        }
        CHECK(*std::min_element(xs.begin(), xs.end()) == lo);
        CHECK(*std::max_element(xs.begin(), xs.end()) == hi);
        CHECK(lo <= hi);
    }
    CHECK(ExtendedReal::neg_inf() < ExtendedReal(-1e308));
    CHECK(ExtendedReal(1e308) < ExtendedReal::pos_inf());
    CHECK_FALSE(ExtendedReal::pos_inf().is_finite());
    CHECK_THROWS_AS(ExtendedReal(std::nan("")), EvaluationError);
}

TEST_CASE("pointwise extremes and negation") {
    RealFunction a = RealFunction::from_expression("x", Interval(0.0, 2.0));
    RealFunction b = RealFunction::from_expression("1 - x", Interval(-1.0, 3.0));
    RealFunction lo = pointwise_min({a, b});
    RealFunction hi = pointwise_max({a, b});
    CHECK(lo.domain().lo() == 0.0);
    CHECK(lo.domain().hi() == 2.0);
    CHECK(lo(0.25) == 0.25);
    CHECK(lo(1.5) == -0.5);
    CHECK(hi(0.25) == 0.75);
    RealFunction na = negate(a);
    CHECK(na(0.5) == -0.5);
}

TEST_CASE("check accumulator report invariants") {
    CheckAccumulator good(1e-9);
    good.add(0.0, 1.0, 0.5);
    good.add(0.5, 1.0, 1e-10);
    CheckReport ok = good.finish();
    CHECK(ok.holds());
    CHECK_FALSE(ok.witness.has_value());
    CHECK(ok.pairs_checked == 2);
    CHECK(ok.worst_margin == doctest::Approx(1e-10));

    CheckAccumulator bad(1e-9);
    bad.add(0.0, 1.0, 0.5);
    bad.add(0.25, 0.75, -0.125);
    bad.add(0.1, 0.9, -0.5);
    CheckReport fail = bad.finish();
    CHECK_FALSE(fail.holds());
    REQUIRE(fail.witness.has_value());
    CHECK(fail.witness->slack == fail.worst_margin);
    CHECK(fail.worst_margin == -0.5);
    CHECK(fail.witness->x == 0.1);
    CHECK(fail.witness->y == 0.9);

    CheckAccumulator hard(0.0);
    hard.add_condition(1.0, 2.0, true);
    hard.add_condition(3.0, 4.0, false);
    CheckReport cond = hard.finish();
    CHECK_FALSE(cond.holds());
    CHECK(cond.pairs_checked == 2);
}

TEST_CASE("sampled csv loading") {
    const char* path = "core_test_samples.csv";
    {
        std::ofstream out(path);
        out << "x,y\r\n0.0,1.0\r\n0.5,2.0\n1.0,-1.5\n";
    }
    SampledCsv csv = load_sampled_csv(path);
    REQUIRE(csv.xs.size() == 3);
    CHECK(csv.xs[1] == 0.5);
    CHECK(csv.ys[2] == -1.5);

    {
        std::ofstream out(path);
        out << "a,b\n0,1\n";
    }
    CHECK_THROWS_AS(load_sampled_csv(path), ConfigError);
    {
        std::ofstream out(path);
        out << "x,y\n0.5,1\n0.5,2\n";
    }
    CHECK_THROWS_AS(load_sampled_csv(path), ConfigError);
    {
        std::ofstream out(path);
        out << "x,y\n0.5,abc\n";
    }
    CHECK_THROWS_AS(load_sampled_csv(path), ConfigError);
    CHECK_THROWS_AS(load_sampled_csv("does_not_exist.csv"), ConfigError);
    std::remove(path);
}
