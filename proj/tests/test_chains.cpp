#include "chaincalc/chain.hpp"
#include "chaincalc/suites.hpp"

#include <doctest.h>

using namespace chaincalc;

namespace {

DiracChain elem(int dim, std::initializer_list<double> p, std::initializer_list<int> axes,
                double c = 1.0) {
    return DiracChain::element(make_point(p),
                               KVector::basis(dim, MultiIndex::from_axes(axes), c));
}

} // namespace

TEST_CASE("combine: cancellation and key merging") {
    Rng rng(21);
    DiracChain A = rng.random_chain(3, 2, 2, 5);
    CHECK(combine(A, A, 1, -1).zero_chain());

    DiracChain x = elem(2, {0.5, 0.25}, {1});
    DiracChain merged = combine(x, x, 1, 1);
    CHECK(merged.size() == 1);
    CHECK(merged.terms()[0].coeff == 2.0);

    DiracChain y = elem(2, {0.75, 0.0}, {1});
    CHECK(combine(x, y, 1, 1).size() == 2);
    CHECK_THROWS(combine(x, elem(2, {0, 0}, {1, 2}), 1, 1));
}

TEST_CASE("translate is the group action on points") {
    DiracChain A = elem(2, {0.25, 0.5}, {1});
    DiracChain T = translate({1.0, -0.5}, A);
    CHECK(T.terms()[0].point == make_point({1.25, 0.0}));
    CHECK(T.terms()[0].coeff == 1.0);
    CHECK(translate({0, 0}, A) == A);

    Rng rng(22);
    DiracChain B = rng.random_chain(2, 1, 2, 4);
    Vector u = rng.dyadic_vector(2), v = rng.dyadic_vector(2);
    Vector uv{u[0] + v[0], u[1] + v[1]};
    CHECK(translate(u, translate(v, B)) == translate(uv, B));
}

TEST_CASE("difference chains: signs, symmetry, finite-difference oracle") {
    DiracChain base = elem(2, {0, 0}, {1});
    DiracChain d1 = difference({{0.5, 0}}, base);
    CHECK(d1.size() == 2);
    double coeff_sum = 0;
    for (auto& t : d1.terms()) coeff_sum += t.coeff;
    CHECK(coeff_sum == 0.0); // alternating signs cancel

    // permutation symmetry
    Vector u{0.5, 0.25}, v{-0.25, 0.5};
    CHECK(difference({u, v}, base) == difference({v, u}, base));

    // zero translation kills the chain
    CHECK(difference({{0.0, 0.0}}, base).zero_chain());

    // inclusion-exclusion signs against a brute-force oracle
    Rng rng(23);
    for (int it = 0; it < 100; ++it) {
        int n = rng.integer(1, 3);
        int j = rng.integer(1, 3);
        std::vector<Vector> sigma;
        for (int i = 0; i < j; ++i) sigma.push_back(rng.dyadic_vector(n));
        Point p{};
        Vector pv = rng.dyadic_vector(n);
        for (int i = 0; i < n; ++i) p[i] = pv[i];
        Expr f = rng.poly(n, 3);
        DiracChain delta = difference(sigma, DiracChain::element(p, KVector::scalar(n, 1.0)));
        double via_chain = 0;
        for (auto& t : delta.terms())
            via_chain += t.coeff * f(std::span<const double>(t.point.data(), kMaxDim));
        double oracle = 0;
        for (std::uint32_t s = 0; s < (1u << j); ++s) {
            Point q = p;
            int bits = 0;
            for (int i = 0; i < j; ++i)
                if (s & (1u << i)) {
                    ++bits;
                    for (int a = 0; a < n; ++a) q[a] += sigma[i][a];
                }
            double sign = ((j - bits) % 2) ? -1.0 : 1.0;
            oracle += sign * f(std::span<const double>(q.data(), kMaxDim));
        }
        CHECK(via_chain == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("support tracks canonical cancellation") {
    DiracChain A = combine(elem(2, {0, 0}, {1}), elem(2, {1, 0}, {2}), 1, 1);
    CHECK(support(A).size() == 2);
    CHECK(support(DiracChain::zero(2, 1)).empty());
    DiracChain gone = combine(elem(2, {0, 0}, {1}), elem(2, {0, 0}, {1}), 1, -1);
    CHECK(support(gone).empty());

    Rng rng(24);
    DiracChain B = rng.random_chain(2, 1, 1, 4), C = rng.random_chain(2, 1, 1, 4);
    auto su = support(combine(B, C, 1, 1));
    auto sb = support(B), sc = support(C);
    for (auto& p : su) {
        bool in_b = std::find(sb.begin(), sb.end(), p) != sb.end();
        bool in_c = std::find(sc.begin(), sc.end(), p) != sc.end();
        CHECK((in_b || in_c));
    }
}

TEST_CASE("restrict keeps exactly the matching points") {
    DiracChain A = combine(elem(2, {0.25, 0}, {1}), elem(2, {0.75, 0}, {2}, 2.0), 1, 1);
    CHECK(restrict_chain(A, [](const Point&) { return true; }) == A);
    DiracChain left = restrict_chain(A, [](const Point& p) { return p[0] < 0.5; });
    CHECK(left.size() == 1);
    CHECK(left.terms()[0].point[0] == 0.25);
}

TEST_CASE("restriction of the two-sided pole sequence to the disk") {
    // B_m restricted to the open unit disk keeps only the inner pole
    const double m = 2.0; // dyadic 1/2m
    ChainBuilder b(2, 0);
    b.add(make_point({1 + 1 / (2 * m), 0}), Degree{}, MultiIndex(), m);
    b.add(make_point({1 - 1 / (2 * m), 0}), Degree{}, MultiIndex(), -m);
    Degree order1{};
    order1[0] = 1;
    b.add(make_point({1, 0}), order1, MultiIndex(), -1.0);
    DiracChain Bm = b.build();
    DiracChain in_disk = restrict_chain(Bm, [](const Point& p) {
        return p[0] * p[0] + p[1] * p[1] < 1.0;
    });
    REQUIRE(in_disk.size() == 1);
    CHECK(in_disk.terms()[0].point == make_point({0.75, 0}));
    CHECK(in_disk.terms()[0].coeff == -2.0);
    CHECK(in_disk.order() == 0);
}

TEST_CASE("text serialization round-trips bit-exactly") {
    Rng rng(25);
    for (int it = 0; it < 50; ++it) {
        int n = rng.integer(1, 4);
        DiracChain A = rng.random_chain(n, rng.integer(0, n), 3, 6);
        DiracChain B = from_text(to_text(A));
        CHECK(A == B);
    }
    // irregular values survive too
    ChainBuilder b(2, 1);
    b.add(make_point({1.0 / 3.0, 1e-17}), Degree{}, MultiIndex::axis(1), 0x1.fffffffffffffp-3);
    DiracChain A = b.build();
    CHECK(from_text(to_text(A)) == A);
    CHECK(from_text(to_text(DiracChain::zero(3, 2))) == DiracChain::zero(3, 2));
}
