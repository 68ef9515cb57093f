// Compares the OpenMP kernels against their serial reference implementations:
// same inputs, bitwise-identical outputs, wall time side by side.

#include "chaincalc/flow.hpp"
#include "chaincalc/operators.hpp"
#include "chaincalc/parallel.hpp"
#include "chaincalc/represent.hpp"

#include <chrono>
#include <cstdio>

using namespace chaincalc;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

template <class F>
double time_ms(F&& f, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

} // namespace

int main() {
    std::printf("threads: %d (CHAINCALC_THREADS overrides)\n", par::max_threads());
    std::printf("%-28s %12s %12s %8s %s\n", "kernel", "serial ms", "parallel ms", "speedup",
                "match");

    // integrate over a fine square chain with a transcendental coefficient
    {
        DiracChain Q = cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, 10, 2);
        Form w = Form::monomial(ScalarField::from_expr(Expr::parse("sin(x)*exp(y)", 2), 2),
                                MultiIndex::full(2), 2);
        double serial_val = 0, par_val = 0;
        double ts = time_ms([&] { serial_val = integrate_serial(w, Q); });
        double tp = time_ms([&] { par_val = integrate(w, Q); });
        std::printf("%-28s %12.2f %12.2f %8.2f %s\n", "integrate (2^20 terms)", ts, tp, ts / tp,
                    serial_val == par_val ? "bitwise" : "MISMATCH");
    }

    // boundary of a fine cube chain
    {
        DiracChain Q = cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, 9, 2);
        DiracChain bs = DiracChain::zero(2, 1), bp = DiracChain::zero(2, 1);
        double ts = time_ms([&] { bs = boundary_serial(Q); });
        double tp = time_ms([&] { bp = boundary(Q); });
        std::printf("%-28s %12.2f %12.2f %8.2f %s\n", "boundary (2^18 terms)", ts, tp, ts / tp,
                    bs == bp ? "bitwise" : "MISMATCH");
    }

    // flow transport of a chain through a nonlinear field
    {
        DiracChain Q = cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, 6, 2);
        VectorFieldSpec V = VectorFieldSpec::from_exprs(
            {Expr::constant(0) - Expr::coord(2), Expr::coord(1)});
        FlowConfig cfg;
        cfg.h_t = 1e-3;
        DiracChain es = DiracChain::zero(2, 2), ep = DiracChain::zero(2, 2);
        double ts = time_ms([&] { es = evolve_serial(Q, V, 1.0, cfg); }, 1);
        double tp = time_ms([&] { ep = evolve(Q, V, 1.0, cfg); }, 1);
        std::printf("%-28s %12.2f %12.2f %8.2f %s\n", "evolve (2^12 trajectories)", ts, tp,
                    ts / tp, es == ep ? "bitwise" : "MISMATCH");
    }
    return 0;
}
