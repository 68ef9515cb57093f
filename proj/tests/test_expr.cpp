#include "chaincalc/expr.hpp"
#include "chaincalc/suites.hpp"

#include <doctest.h>

using namespace chaincalc;

namespace {
double at(const Expr& e, std::initializer_list<double> xs) {
    std::vector<double> v(xs);
    v.resize(8, 0.0);
    return e(v);
}
} // namespace

TEST_CASE("expression parsing and evaluation") {
    Expr e = Expr::parse("x^2 + 3*y - 2", 2);
    CHECK(at(e, {2, 1}) == doctest::Approx(5.0));
    CHECK(at(Expr::parse("sin(x)*cos(y)", 2), {0, 0}) == doctest::Approx(0.0));
    CHECK(at(Expr::parse("exp(x1 + x2)", 2), {1, -1}) == doctest::Approx(1.0));
    CHECK(at(Expr::parse("-x + (y - 1)*(y + 1)", 2), {3, 2}) == doctest::Approx(0.0));
    CHECK(at(Expr::parse("x3^3", 3), {0, 0, 2}) == doctest::Approx(8.0));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(Expr::parse("x +", 2), ExprParseError);
    CHECK_THROWS_AS(Expr::parse("foo(x)", 2), ExprParseError);
    CHECK_THROWS_AS(Expr::parse("x3", 2), ExprParseError); // beyond dimension
    CHECK_THROWS_AS(Expr::parse("x^y", 2), ExprParseError);
    CHECK_THROWS_AS(Expr::parse("x^-2", 2), ExprParseError);
    try {
        Expr::parse("1 + %", 2);
        CHECK(false);
    } catch (const ExprParseError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("symbolic derivative matches central differences") {
    Rng rng(31);
    const char* samples[] = {"x^3*y - 2*x*y^2", "sin(x*y)", "exp(x - y^2)", "cos(x)*x^2 + y"};
    for (const char* s : samples) {
        Expr e = Expr::parse(s, 2);
        for (int axis = 1; axis <= 2; ++axis) {
            Expr de = e.derivative(axis);
            for (int it = 0; it < 20; ++it) {
                std::vector<double> p{rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
                p.resize(8, 0.0);
                const double h = 1e-6;
                auto hi = p, lo = p;
                hi[axis - 1] += h;
                lo[axis - 1] -= h;
                double fd = (e(hi) - e(lo)) / (2 * h);
                CHECK(de(p) == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
    // second symbolic derivatives stay exact
    Expr e = Expr::parse("x^4", 1);
    Expr d2 = e.derivative(1).derivative(1);
    std::vector<double> p{1.5};
    p.resize(8, 0.0);
    CHECK(d2(p) == doctest::Approx(12 * 1.5 * 1.5));
}
