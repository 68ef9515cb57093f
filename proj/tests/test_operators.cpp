#include "chaincalc/operators.hpp"
#include "chaincalc/suites.hpp"

#include <doctest.h>

using namespace chaincalc;

namespace {

DiracChain elem(int dim, const Point& p, std::initializer_list<int> axes, double c = 1.0) {
    return DiracChain::element(p, KVector::basis(dim, MultiIndex::from_axes(axes), c));
}

DiracChain term_chain(int dim, const Point& p, std::initializer_list<int> degree,
                      std::initializer_list<int> axes, double c = 1.0) {
    ChainTerm t;
    t.point = p;
    int i = 0;
    for (int d : degree) t.degree[i++] = std::uint8_t(d);
    t.index = MultiIndex::from_axes(axes);
    t.coeff = c;
    return DiracChain::single(dim, t);
}

const Point origin{};

} // namespace

TEST_CASE("extrusion on elements") {
    auto e1 = VectorFieldSpec::constant({1, 0, 0});
    CHECK(extrude(e1, elem(3, origin, {2})) == elem(3, origin, {1, 2}));
    CHECK(extrude(e1, elem(3, origin, {1})).zero_chain());
    // field vanishing at the point kills the term
    auto V = VectorFieldSpec::from_exprs({Expr::coord(1), Expr::constant(0)});
    CHECK(extrude(V, elem(2, origin, {2})).zero_chain());
    CHECK_THROWS(extrude(e1, elem(3, origin, {1, 2, 3})));
}

TEST_CASE("retraction on elements") {
    auto e1 = VectorFieldSpec::constant({1, 0, 0});
    CHECK(retract(e1, elem(3, origin, {1, 2})) == elem(3, origin, {2}));
    auto e12 = VectorFieldSpec::constant({1, 1, 0});
    DiracChain expect = combine(elem(3, origin, {2}), elem(3, origin, {1}), 1, -1);
    CHECK(retract(e12, elem(3, origin, {1, 2})) == expect);
    auto e3 = VectorFieldSpec::constant({0, 0, 1});
    CHECK(retract(e3, elem(3, origin, {1, 2})).zero_chain());
}

TEST_CASE("prederivative: degree increments, linearity, symmetry") {
    auto e1 = VectorFieldSpec::constant({1, 0, 0});
    CHECK(prederiv(e1, elem(3, origin, {})) == term_chain(3, origin, {1}, {}));

    Rng rng(51);
    DiracChain J = rng.random_chain(3, 1, 2, 3);
    Vector u = rng.dyadic_vector(3), w = rng.dyadic_vector(3);
    Vector uw{u[0] + w[0], u[1] + w[1], u[2] + w[2]};
    DiracChain lin = combine(prederiv(VectorFieldSpec::constant(u), J),
                             prederiv(VectorFieldSpec::constant(w), J), 1, 1);
    CHECK(prederiv(VectorFieldSpec::constant(uw), J) == lin);

    auto Pu = prederiv(VectorFieldSpec::constant(u),
                       prederiv(VectorFieldSpec::constant(w), J));
    auto Pw = prederiv(VectorFieldSpec::constant(w),
                       prederiv(VectorFieldSpec::constant(u), J));
    CHECK(Pu == Pw);
}

TEST_CASE("boundary on elements and its square") {
    DiracChain b1 = boundary(elem(3, origin, {1}));
    CHECK(b1 == term_chain(3, origin, {1}, {}));
    DiracChain b12 = boundary(elem(3, origin, {1, 2}));
    DiracChain expect = combine(term_chain(3, origin, {1, 0}, {2}),
                                term_chain(3, origin, {0, 1}, {1}), 1, -1);
    CHECK(b12 == expect);

    Rng rng(52);
    for (int it = 0; it < 100; ++it) {
        int n = rng.integer(1, 4);
        DiracChain J = rng.random_chain(n, rng.integer(0, n), 3, 4);
        CHECK(boundary(boundary(J)).zero_chain());
    }
}

TEST_CASE("directional boundary") {
    CHECK(dir_boundary({1, 0}, term_chain(2, origin, {0, 0}, {1})) ==
          term_chain(2, origin, {1, 0}, {}));
    // P_{e2} E_{e2}^t (p; e1^e2) = -(p; e2 (x) e1)
    CHECK(dir_boundary({0, 1}, elem(2, origin, {1, 2})) ==
          term_chain(2, origin, {0, 1}, {1}, -1.0));
    CHECK(dir_boundary({0, 0, 1}, elem(3, origin, {1})).zero_chain());
}

TEST_CASE("perpendicular complement of chains") {
    CHECK(perp_chain(elem(2, origin, {})) == elem(2, origin, {1, 2}));
    Rng rng(53);
    for (int it = 0; it < 100; ++it) {
        int n = rng.integer(1, 4);
        int k = rng.integer(0, n);
        DiracChain J = rng.random_chain(n, k, 2, 3);
        double s = ((k * (n - k) + n) % 2) ? -1.0 : 1.0;
        CHECK(combine(perp_chain(perp_chain(J)), J, 1, -s).zero_chain());
        // term count and absolute coefficients preserved on basis terms
        DiracChain P = perp_chain(J);
        CHECK(P.size() == J.size());
        double sum_in = 0, sum_out = 0;
        for (auto& t : J.terms()) sum_in += std::abs(t.coeff);
        for (auto& t : P.terms()) sum_out += std::abs(t.coeff);
        CHECK(sum_in == doctest::Approx(sum_out));
    }
}

TEST_CASE("geometric Laplace preserves grade and matches the analytic Laplacian") {
    Rng rng(54);
    for (int it = 0; it < 30; ++it) {
        int n = rng.integer(2, 3);
        int k = rng.integer(0, n);
        DiracChain J = rng.random_chain(n, k, 1, 3);
        DiracChain L = laplace(J);
        CHECK(L.grade() == J.grade());
    }
    // pairing with a 0-form at a point gives the classical Laplacian
    Expr f = Expr::parse("x^3*y + x*y^2", 2);
    Expr lap = f.derivative(1).derivative(1) + f.derivative(2).derivative(2);
    Form w = Form::function(ScalarField::from_expr(f, 2), 2);
    Point p = make_point({0.5, -0.25});
    DiracChain delta = elem(2, p, {});
    std::vector<double> pv(p.begin(), p.end());
    CHECK(integrate(w, laplace(delta)) == doctest::Approx(lap(pv)).epsilon(1e-12));
    // coboundary of a (n-1)-chain pairs with star d star
    Form dens = parse_form("x^2*dV", 2);
    DiracChain K = rng.random_chain(2, 1, 0, 3);
    CHECK(integrate(dens, cobound(K)) ==
          doctest::Approx(integrate(star(d(star(dens))), K)).epsilon(1e-12));
    // the Dirac operator returns both graded parts
    auto parts = dirac_op(rng.random_chain(2, 1, 0, 2));
    CHECK(parts[0].grade() == 0);
    CHECK(parts[1].grade() == 2);
}

TEST_CASE("multiplication by a function") {
    Rng rng(55);
    DiracChain J = rng.random_chain(2, 1, 2, 4);
    CHECK(mult(ScalarField::constant(1.0), J) == J);

    auto f = ScalarField::from_expr(Expr::parse("x*y + 2", 2), 2);
    Point p = make_point({0.5, 0.25});
    DiracChain single = elem(2, p, {1}, 2.0);
    DiracChain scaled = mult(f, single);
    CHECK(scaled.size() == 1);
    CHECK(scaled.terms()[0].coeff == doctest::Approx(2.0 * (0.5 * 0.25 + 2)));

    // f(x) = x against the dipole at 0 leaves the point mass
    auto fx = ScalarField::coordinate(1, 1);
    CHECK(mult(fx, term_chain(1, origin, {1}, {})) == elem(1, origin, {}));

    // change-of-density duality on higher-order terms, any peel order
    for (int it = 0; it < 40; ++it) {
        DiracChain A = rng.random_chain(2, rng.integer(0, 2), 3, 3);
        ScalarField g = ScalarField::from_expr(rng.poly(2, 3), 2);
        Form w = Form::monomial(ScalarField::from_expr(rng.poly(2, 3), 2),
                                rng.random_index(2, A.grade()), 2);
        CHECK(integrate(w, mult(g, A)) ==
              doctest::Approx(integrate(times(g, w), A)).epsilon(1e-11));
    }
}

TEST_CASE("pushforward") {
    Rng rng(56);
    DiracChain J = rng.random_chain(2, 1, 2, 4);
    CHECK(pushforward(SmoothMap::identity(2), J) == J);

    // linear map acts by Jacobian minors
    std::vector<Vector> M{{1, 2}, {3, 4}};
    SmoothMap lin = SmoothMap::affine(M, {0, 0});
    DiracChain area = elem(2, make_point({0.5, 0.5}), {1, 2});
    DiracChain out = pushforward(lin, area);
    REQUIRE(out.size() == 1);
    CHECK(out.terms()[0].coeff == doctest::Approx(1 * 4 - 2 * 3)); // det
    CHECK(out.terms()[0].point == make_point({1.5, 3.5}));

    // grade 0 transports the bare mass
    DiracChain mass0 = elem(2, make_point({0.25, 0}), {}, 7.0);
    SmoothMap F = SmoothMap::from_exprs(
        2, {Expr::coord(1) + Expr::coord(2).pow(2), Expr::coord(1) * Expr::coord(2)});
    DiracChain moved = pushforward(F, mass0);
    REQUIRE(moved.size() == 1);
    CHECK(moved.terms()[0].coeff == 7.0);
    CHECK(moved.terms()[0].point[0] == doctest::Approx(0.25));
    CHECK(moved.terms()[0].point[1] == doctest::Approx(0.0));

    // boundary commutes with affine pushforward, any order
    DiracChain K = rng.random_chain(2, 2, 2, 3);
    CHECK(combine(pushforward(lin, boundary(K)), boundary(pushforward(lin, K)), 1, -1)
              .zero_chain());

    // nonaffine maps reject higher-order terms loudly
    DiracChain dip = term_chain(2, origin, {1, 0}, {1});
    CHECK_THROWS(pushforward(F, dip));
}
