#include "chaincalc/flow.hpp"
#include "chaincalc/operators.hpp"
#include "chaincalc/parallel.hpp"
#include "chaincalc/represent.hpp"
#include "chaincalc/suites.hpp"

#include <cstdlib>
#include <doctest.h>

using namespace chaincalc;

namespace {

struct ThreadsGuard {
    explicit ThreadsGuard(const char* v) { setenv("CHAINCALC_THREADS", v, 1); }
    ~ThreadsGuard() { unsetenv("CHAINCALC_THREADS"); }
};

} // namespace

TEST_CASE("parallel kernels match the serial reference bitwise") {
    DiracChain Q = cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, 7, 2); // 16384 terms
    Form w = Form::monomial(ScalarField::from_expr(Expr::parse("sin(x)*exp(y)", 2), 2),
                            MultiIndex::full(2), 2);

    double serial;
    DiracChain bd_serial = DiracChain::zero(2, 1);
    {
        ThreadsGuard g("1");
        serial = integrate(w, Q);
        bd_serial = boundary(Q);
        CHECK(serial == integrate_serial(w, Q));
        CHECK(bd_serial == boundary_serial(Q));
    }
    {
        ThreadsGuard g("4");
        CHECK(par::max_threads() == 4);
        CHECK(integrate(w, Q) == serial);
        CHECK(boundary(Q) == bd_serial);
    }
}

TEST_CASE("evolved chains are schedule-independent") {
    DiracChain Q = cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, 6, 2); // 4096 terms
    auto V = VectorFieldSpec::from_exprs({Expr::constant(0) - Expr::coord(2), Expr::coord(1)});
    FlowConfig cfg;
    cfg.h_t = 1e-2;
    DiracChain ref = DiracChain::zero(2, 2);
    {
        ThreadsGuard g("1");
        ref = evolve(Q, V, 0.5, cfg);
        CHECK(ref == evolve_serial(Q, V, 0.5, cfg));
    }
    {
        ThreadsGuard g("3");
        CHECK(evolve(Q, V, 0.5, cfg) == ref);
    }
}

TEST_CASE("map_terms agrees with its serial reference for expanding maps") {
    Rng rng(91);
    ChainBuilder big(2, 1);
    for (int i = 0; i < 5000; ++i) {
        Vector p = rng.dyadic_vector(2, 6);
        big.add(make_point({p[0], p[1]}), Degree{}, MultiIndex::axis(1 + (i % 2)), rng.dyadic());
    }
    DiracChain A = big.build();
    auto fanout = [](const ChainTerm& t, ChainBuilder& out) {
        ChainTerm a = t, b = t;
        a.coeff *= 0.5;
        b.coeff *= -0.25;
        b.degree[0]++;
        out.add(a);
        out.add(b);
    };
    DiracChain s = map_terms_serial(A, 1, fanout);
    {
        ThreadsGuard g("4");
        CHECK(map_terms(A, 1, fanout) == s);
    }
}
