#include "chaincalc/suites.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace chaincalc {

namespace {

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::string dims_str(const DiracChain& J) {
    std::ostringstream os;
    os << "n=" << J.dim() << " k=" << J.grade() << " s=" << J.order() << " terms=" << J.size();
    return os.str();
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

} // namespace

double Rng::dyadic(int scale_bits, double range) {
    const std::int64_t lim = std::int64_t(range * (1 << scale_bits));
    std::int64_t k = 0;
    while (k == 0) k = std::int64_t(bits() % std::uint64_t(2 * lim + 1)) - lim;
    return double(k) / double(1 << scale_bits);
}

Vector Rng::dyadic_vector(int dim, int scale_bits, double range) {
    Vector v(dim);
    for (auto& x : v) x = dyadic(scale_bits, range);
    return v;
}

MultiIndex Rng::random_index(int dim, int grade) {
    std::vector<int> axes(dim);
    for (int i = 0; i < dim; ++i) axes[i] = i + 1;
    for (int i = dim - 1; i > 0; --i) std::swap(axes[i], axes[integer(0, i)]);
    axes.resize(grade);
    return MultiIndex::from_axes(axes);
}

DiracChain Rng::random_chain(int dim, int grade, int max_order, int max_terms) {
    ChainBuilder b(dim, grade);
    int nterms = integer(1, max_terms);
    for (int t = 0; t < nterms; ++t) {
        ChainTerm term;
        Vector p = dyadic_vector(dim);
        for (int i = 0; i < dim; ++i) term.point[i] = p[i];
        int order = integer(0, max_order);
        for (int o = 0; o < order; ++o) term.degree[integer(0, dim - 1)]++;
        term.index = random_index(dim, grade);
        term.coeff = dyadic();
        b.add(term);
    }
    return b.build();
}

Expr Rng::poly(int dim, int deg, int monomials) {
    Expr e = Expr::constant(integer(-2, 2));
    for (int m = 0; m < monomials; ++m) {
        Expr mono = Expr::constant(integer(-3, 3));
        int remaining = deg;
        for (int a = 1; a <= dim; ++a) {
            int p = integer(0, remaining);
            remaining -= p;
            if (p > 0) mono = mono * Expr::coord(a).pow(p);
        }
        e = e + mono;
    }
    return e;
}

// ---------------------------------------------------------------------------
// Algebra suite

namespace {

DiracChain zero_like(const DiracChain& J) { return DiracChain::zero(J.dim(), J.grade()); }

} // namespace

Report run_algebra_suite(std::uint64_t seed, double tol, int iterations) {
    Timer timer;
    Rng rng(seed);
    Report rep;
    rep.suite = "algebra";
    rep.seed = seed;
    rep.config["iterations"] = std::to_string(iterations);
    rep.config["tol"] = std::to_string(tol);

    for (int it = 0; it < iterations; ++it) {
        const int n = rng.integer(1, 4);
        const int k = rng.integer(0, n);
        DiracChain J = rng.random_chain(n, k, 3, 3);
        Vector v = rng.dyadic_vector(n), w = rng.dyadic_vector(n);
        auto Vf = VectorFieldSpec::constant(v);
        auto Wf = VectorFieldSpec::constant(w);
        std::string params = dims_str(J);
        auto tag = [&](const char* name) { return std::string(name) + "/" + std::to_string(it); };

        // boundary squares to zero
        rep.add_residual(tag("dd"), params, boundary(boundary(J)).max_abs_coeff(), tol);

        // {E_v, E_w^t} = <v,w> I
        {
            double vw = dot(std::span(v), std::span(w));
            DiracChain a = (k < n) ? retract(Wf, extrude(Vf, J)) : zero_like(J);
            DiracChain b = (k > 0) ? extrude(Vf, retract(Wf, J)) : zero_like(J);
            DiracChain res = combine(combine(a, b, 1, 1), J, 1, -vw);
            rep.add_residual(tag("car"), params, res.max_abs_coeff(), tol);
        }

        // (E_v + E_v^t)^2 = <v,v> I: the grade-preserving part carries the
        // whole square since E_v^2 and (E_v^t)^2 vanish identically.
        {
            double vv = dot(std::span(v), std::span(v));
            DiracChain a = (k < n) ? retract(Vf, extrude(Vf, J)) : zero_like(J);
            DiracChain b = (k > 0) ? extrude(Vf, retract(Vf, J)) : zero_like(J);
            DiracChain sq = combine(a, b, 1, 1);
            rep.add_residual(tag("clifford"), params,
                             combine(sq, J, 1, -vv).max_abs_coeff(), tol);
            double off_grade = 0;
            if (k + 2 <= n) off_grade += extrude(Vf, extrude(Vf, J)).max_abs_coeff();
            if (k >= 2) off_grade += retract(Vf, retract(Vf, J)).max_abs_coeff();
            rep.add_residual(tag("clifford_offgrade"), params, off_grade, tol);
        }

        // {boundary, E_v} = P_v
        {
            DiracChain a = (k < n) ? boundary(extrude(Vf, J)) : zero_like(J);
            DiracChain b = (k > 0) ? extrude(Vf, boundary(J)) : zero_like(J);
            DiracChain res = combine(combine(a, b, 1, 1), prederiv(Vf, J), 1, -1);
            rep.add_residual(tag("cartan"), params, res.max_abs_coeff(), tol);
        }

        // [E_v^t, boundary] = 0
        if (k >= 1) {
            DiracChain a = retract(Vf, boundary(J));
            DiracChain b = boundary(retract(Vf, J));
            rep.add_residual(tag("ret_bd"), params, combine(a, b, 1, -1).max_abs_coeff(), tol);
        }

        // [P_v, boundary] = 0
        {
            DiracChain a = prederiv(Vf, boundary(J));
            DiracChain b = boundary(prederiv(Vf, J));
            rep.add_residual(tag("pre_bd"), params, combine(a, b, 1, -1).max_abs_coeff(), tol);
        }

        // perp involution: perp(perp(J)) = (-1)^(k(n-k)+n) J
        {
            double s = ((k * (n - k) + n) % 2) ? -1.0 : 1.0;
            DiracChain res = combine(perp_chain(perp_chain(J)), J, 1, -s);
            rep.add_residual(tag("perp2"), params, res.max_abs_coeff(), tol);
        }
    }
    rep.wall_ms = timer.ms();
    rep.timestamp = iso_timestamp();
    return rep;
}

// ---------------------------------------------------------------------------
// Duality suite

namespace {

template <class F>
void for_each_index_of_grade(int n, int k, F&& f) {
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == int(k)) f(MultiIndex(m));
}

ScalarField field_from_expr(const Expr& e, int dim, OracleKind oracle) {
    if (oracle == OracleKind::Analytic) return ScalarField::from_expr(e, dim);
    return ScalarField::finite_difference(
        [e](const Point& p) { return e(std::span<const double>(p.data(), kMaxDim)); }, dim);
}

Form random_form(Rng& rng, int dim, int grade, int deg, OracleKind oracle) {
    Form w(dim, grade);
    bool any = false;
    for_each_index_of_grade(dim, grade, [&](MultiIndex idx) {
        if (rng.integer(0, 9) < 7) {
            w.set_component(idx, field_from_expr(rng.poly(dim, deg), dim, oracle));
            any = true;
        }
    });
    if (!any) w.set_component(rng.random_index(dim, grade),
                              field_from_expr(rng.poly(dim, deg), dim, oracle));
    return w;
}

VectorFieldSpec random_field(Rng& rng, int dim, int deg) {
    std::vector<Expr> comps;
    for (int i = 0; i < dim; ++i) comps.push_back(rng.poly(dim, deg));
    return VectorFieldSpec::from_exprs(comps);
}

} // namespace

Report run_duality_suite(std::uint64_t seed, OracleKind oracle, double tol, int iterations) {
    if (tol <= 0) tol = (oracle == OracleKind::Analytic) ? 1e-10 : 1e-5;
    Timer timer;
    Rng rng(seed);
    Report rep;
    rep.suite = "duality";
    rep.seed = seed;
    rep.config["oracle"] = oracle == OracleKind::Analytic ? "analytic" : "fd";
    rep.config["tol"] = std::to_string(tol);
    rep.config["iterations"] = std::to_string(iterations);

    const int max_order = (oracle == OracleKind::Analytic) ? 2 : 0;
    for (int it = 0; it < iterations; ++it) {
        const int n = rng.integer(2, 3);
        const int k = rng.integer(0, n);
        DiracChain J = rng.random_chain(n, k, max_order, 3);
        std::string params = dims_str(J);
        auto tag = [&](const char* name) { return std::string(name) + "/" + std::to_string(it); };
        VectorFieldSpec V = random_field(rng, n, 2);

        if (k < n) {
            Form w = random_form(rng, n, k + 1, 3, oracle);
            rep.add_residual(tag("extrude_interior"), params,
                             rel_err(integrate(w, extrude(V, J)), integrate(interior(V, w), J)),
                             tol);
        }
        if (k > 0) {
            Form w = random_form(rng, n, k - 1, 3, oracle);
            rep.add_residual(tag("retract_flat"), params,
                             rel_err(integrate(w, retract(V, J)), integrate(flat_wedge(V, w), J)),
                             tol);
        }
        {
            Form w = random_form(rng, n, k, 3, oracle);
            rep.add_residual(tag("prederiv_lie"), params,
                             rel_err(integrate(w, prederiv(V, J)), integrate(lie(V, w), J)), tol);
        }
        if (k > 0) {
            Form w = random_form(rng, n, k - 1, 3, oracle);
            rep.add_residual(tag("boundary_d"), params,
                             rel_err(integrate(w, boundary(J)), integrate(d(w), J)), tol);
        }
        {
            Form w = random_form(rng, n, n - k, 3, oracle);
            rep.add_residual(tag("perp_star"), params,
                             rel_err(integrate(w, perp_chain(J)), integrate(star(w), J)), tol);
        }
        {
            Form w = random_form(rng, n, k, 3, oracle);
            ScalarField f = field_from_expr(rng.poly(n, 3), n, oracle);
            rep.add_residual(tag("mult_density"), params,
                             rel_err(integrate(w, mult(f, J)), integrate(times(f, w), J)), tol);
        }
        {
            // affine pushforward, any order
            std::vector<Vector> M(n, Vector(n));
            for (auto& row : M)
                for (auto& x : row) x = rng.dyadic();
            Vector off = rng.dyadic_vector(n);
            SmoothMap F = SmoothMap::affine(M, off);
            Form w = random_form(rng, n, k, 3, oracle);
            rep.add_residual(tag("push_pull_affine"), params,
                             rel_err(integrate(w, pushforward(F, J)), integrate(pullback(F, w), J)),
                             tol);
        }
        {
            // nonlinear pushforward on the order-0 part
            DiracChain J0 = rng.random_chain(n, k, 0, 3);
            std::vector<Expr> comps;
            for (int i = 1; i <= n; ++i)
                comps.push_back(Expr::coord(i) + Expr::constant(0.25) * rng.poly(n, 2, 2));
            SmoothMap F = SmoothMap::from_exprs(n, comps);
            Form w = random_form(rng, n, k, 3, oracle);
            rep.add_residual(tag("push_pull_smooth"), dims_str(J0),
                             rel_err(integrate(w, pushforward(F, J0)),
                                     integrate(pullback(F, w), J0)),
                             tol);
        }
    }
    rep.wall_ms = timer.ms();
    rep.timestamp = iso_timestamp();
    return rep;
}

// ---------------------------------------------------------------------------
// Commutator suite

Report run_commutator_suite(std::uint64_t seed, double tol, int iterations) {
    Timer timer;
    Rng rng(seed);
    Report rep;
    rep.suite = "commutators";
    rep.seed = seed;
    rep.config["tol"] = std::to_string(tol);
    rep.config["iterations"] = std::to_string(iterations);

    for (int it = 0; it < iterations; ++it) {
        const int n = rng.integer(2, 3);
        const int k = rng.integer(0, n);
        DiracChain J = rng.random_chain(n, k, 0, 3);
        VectorFieldSpec V1 = random_field(rng, n, 2);
        VectorFieldSpec V2 = random_field(rng, n, 2);
        VectorFieldSpec B = lie_bracket(V1, V2);
        std::string params = dims_str(J);
        auto tag = [&](const char* name) { return std::string(name) + "/" + std::to_string(it); };

        {
            DiracChain a = prederiv(V1, prederiv(V2, J));
            DiracChain b = prederiv(V2, prederiv(V1, J));
            DiracChain res = combine(combine(a, b, 1, -1), prederiv(B, J), 1, -1);
            rep.add_residual(tag("pp_bracket"), params, res.max_abs_coeff(), tol);
        }
        if (k < n) {
            DiracChain a = extrude(V2, prederiv(V1, J));
            DiracChain b = prederiv(V1, extrude(V2, J));
            DiracChain res = combine(combine(a, b, 1, -1), extrude(B, J), 1, -1);
            rep.add_residual(tag("ep_bracket"), params, res.max_abs_coeff(), tol);
        }
        if (k > 0) {
            DiracChain a = retract(V2, prederiv(V1, J));
            DiracChain b = prederiv(V1, retract(V2, J));
            DiracChain res = combine(combine(a, b, 1, -1), retract(B, J), 1, -1);
            rep.add_residual(tag("rp_bracket"), params, res.max_abs_coeff(), tol);
        }
    }
    rep.wall_ms = timer.ms();
    rep.timestamp = iso_timestamp();
    return rep;
}

// ---------------------------------------------------------------------------
// Cartesian suite

Report run_cartesian_suite(std::uint64_t seed, double tol, int pairs) {
    Timer timer;
    Rng rng(seed);
    Report rep;
    rep.suite = "cartesian";
    rep.seed = seed;
    rep.config["tol"] = std::to_string(tol);
    rep.config["pairs"] = std::to_string(pairs);

    for (int it = 0; it < pairs; ++it) {
        const int n1 = rng.integer(1, 3), n2 = rng.integer(1, 3);
        const int k = rng.integer(0, n1), l = rng.integer(0, n2);
        DiracChain J = rng.random_chain(n1, k, 2, 3);
        DiracChain K = rng.random_chain(n2, l, 2, 3);
        std::ostringstream ps;
        ps << "n1=" << n1 << " k=" << k << " n2=" << n2 << " l=" << l;
        auto tag = [&](const char* name) { return std::string(name) + "/" + std::to_string(it); };

        // boundary Leibniz rule with graded sign and degenerate low-grade cases
        {
            DiracChain lhs = boundary(cartesian_wedge(J, K));
            DiracChain rhs = DiracChain::zero(n1 + n2, std::max(k + l - 1, 0));
            if (k > 0) rhs = combine(rhs, cartesian_wedge(boundary(J), K), 1, 1);
            if (l > 0)
                rhs = combine(rhs, cartesian_wedge(J, boundary(K)), 1, (k % 2) ? -1.0 : 1.0);
            rep.add_residual(tag("leibniz"), ps.str(), combine(lhs, rhs, 1, -1).max_abs_coeff(),
                             tol);
        }
        // Fubini through the product form
        {
            Rng rng2(seed ^ (0x9e3779b97f4a7c15ull + it));
            Form w = random_form(rng2, n1, k, 2, OracleKind::Analytic);
            Form eta = random_form(rng2, n2, l, 2, OracleKind::Analytic);
            double lhs = integrate(product_form(w, n1, eta, n2), cartesian_wedge(J, K));
            double rhs = integrate(w, J) * integrate(eta, K);
            rep.add_residual(tag("fubini"), ps.str(), rel_err(lhs, rhs), tol);
        }
    }
    rep.wall_ms = timer.ms();
    rep.timestamp = iso_timestamp();
    return rep;
}

// ---------------------------------------------------------------------------
// Norms suite

Report run_norms_suite(std::uint64_t seed, double tol) {
    Timer timer;
    Rng rng(seed);
    Report rep;
    rep.suite = "norms";
    rep.seed = seed;
    rep.config["tol"] = std::to_string(tol);

    const int n = 2;
    auto unit_square = [&](int j) {
        return cube_chain(Point{}, 1.0, MultiIndex::full(n), 1, j, n);
    };
    std::vector<CertifiedForm> dict{{"dV", Form::volume(n), 1.0}};

    for (int j = 0; j <= 6; ++j) {
        DiracChain Pj = unit_square(j);
        for (int r : {0, 1}) {
            auto up = norm_upper(Pj, r, UpperStrategy::Pairing);
            auto lo = norm_lower(Pj, r, dict);
            std::string params = "j=" + std::to_string(j) + " r=" + std::to_string(r);
            rep.add("pj_upper/" + std::to_string(j) + "/" + std::to_string(r), params, 1.0,
                    up.bound, tol);
            rep.add("pj_lower/" + std::to_string(j) + "/" + std::to_string(r), params, 1.0,
                    lo.bound, tol);
        }
    }
    for (int j = 0; j <= 6; ++j) {
        DiracChain Dj = combine(unit_square(j), unit_square(j + 1), 1, -1);
        auto up = norm_upper(Dj, 1, UpperStrategy::Pairing);
        rep.add_upper("refine_bound/" + std::to_string(j), "j=" + std::to_string(j), up.bound,
                      std::ldexp(2.0, -j));
        // certifying decomposition must reconstruct exactly
        double verified = norm_upper(Dj, 1, up.witness);
        rep.add("refine_witness/" + std::to_string(j), "j=" + std::to_string(j), up.bound,
                verified, 0.0);
    }
    // pairing bound never exceeds the trivial mass bound
    for (int it = 0; it < 20; ++it) {
        DiracChain A = rng.random_chain(2, rng.integer(0, 2), 0, 6);
        double mass_bound = norm_upper(A, 0, UpperStrategy::Trivial).bound;
        for (int r : {1, 2}) {
            double pb = norm_upper(A, r, UpperStrategy::Pairing).bound;
            rep.add_upper("pairing_le_mass/" + std::to_string(it) + "/" + std::to_string(r),
                          dims_str(A), pb, mass_bound + 1e-15);
        }
    }
    // pairing bound dominates the certified lower bound
    for (int it = 0; it < 20; ++it) {
        DiracChain A = rng.random_chain(2, 2, 0, 6);
        double upper = norm_upper(A, 1, UpperStrategy::Pairing).bound;
        double lower = norm_lower(A, 1, dict).bound;
        rep.add_upper("bracket_order/" + std::to_string(it), dims_str(A), lower, upper + 1e-12);
    }
    rep.wall_ms = timer.ms();
    rep.timestamp = iso_timestamp();
    return rep;
}

std::optional<Report> run_suite(const std::string& name, std::uint64_t seed, OracleKind oracle,
                                double tol_override) {
    double t = tol_override;
    if (name == "algebra") return run_algebra_suite(seed, t > 0 ? t : 1e-12);
    if (name == "duality") return run_duality_suite(seed, oracle, t);
    if (name == "commutators") return run_commutator_suite(seed, t > 0 ? t : 1e-9);
    if (name == "cartesian") return run_cartesian_suite(seed, t > 0 ? t : 1e-12);
    if (name == "norms") return run_norms_suite(seed, t > 0 ? t : 1e-12);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Convergence tables

namespace {

/// Independent reference: composite-midpoint line integral of a 1-form along
/// the segment [p0, p1].
double edge_integral(const Form& w, const Point& p0, const Point& p1, int nq = 4096) {
    const int n = w.dim();
    KVector dir(n, 1);
    Vector delta(n);
    for (int i = 0; i < n; ++i) delta[i] = p1[i] - p0[i];
    double acc = 0;
    for (int q = 0; q < nq; ++q) {
        double t = (q + 0.5) / nq;
        Point p{};
        for (int i = 0; i < n; ++i) p[i] = p0[i] + t * delta[i];
        acc += w(p, KVector::from_vector(delta));
    }
    return acc / nq;
}

ConvergeRow make_row(int j, double lhs, double rhs, double prev_err) {
    double err = std::abs(lhs - rhs);
    double ratio = (prev_err > 0) ? err / prev_err : 0.0;
    return {j, lhs, rhs, err, ratio};
}

OpenSetSpec square_spec() {
    OpenSetSpec s;
    s.predicate = [](const Point& p) {
        return p[0] > 0 && p[0] < 1 && p[1] > 0 && p[1] < 1;
    };
    s.bbox_lo = {0, 0};
    s.bbox_hi = {1, 1};
    return s;
}

OpenSetSpec disk_spec() {
    OpenSetSpec s;
    s.predicate = [](const Point& p) { return p[0] * p[0] + p[1] * p[1] < 1.0; };
    s.bbox_lo = {-1, -1};
    s.bbox_hi = {1, 1};
    return s;
}

} // namespace

ConvergeTable converge_stokes(const Form& w, int j_lo, int j_hi) {
    if (w.dim() != 2 || w.grade() != 1)
        throw std::invalid_argument("stokes table expects a 1-form on R^2");
    ConvergeTable tab{"stokes", {}};
    // reference: circulation around the unit square, counterclockwise
    Point a = make_point({0, 0}), b = make_point({1, 0}), c = make_point({1, 1}),
          d4 = make_point({0, 1});
    double ref = edge_integral(w, a, b) + edge_integral(w, b, c) + edge_integral(w, c, d4) +
                 edge_integral(w, d4, a);
    OpenSetSpec spec = square_spec();
    double prev = 0;
    for (int j = j_lo; j <= j_hi; ++j) {
        DiracChain Wj = open_set_chain(spec, j, 2);
        double lhs = integrate(w, boundary(Wj));
        tab.rows.push_back(make_row(j, lhs, ref, prev));
        prev = tab.rows.back().err;
    }
    return tab;
}

ConvergeTable converge_gauss_green(const Form& w, int j_lo, int j_hi) {
    if (w.dim() != 2 || w.grade() != 1)
        throw std::invalid_argument("gauss-green table expects a 1-form on R^2");
    ConvergeTable tab{"gauss-green", {}};
    // reference: polar-grid quadrature of d(star w) over the unit disk
    Form flux = d(star(w));
    const ScalarField* dens = flux.component(MultiIndex::full(2));
    double ref = 0;
    const int nr = 512, nt = 512;
    for (int ir = 0; ir < nr; ++ir) {
        double r = (ir + 0.5) / nr;
        for (int it2 = 0; it2 < nt; ++it2) {
            double th = 2 * M_PI * (it2 + 0.5) / nt;
            Point p = make_point({r * std::cos(th), r * std::sin(th)});
            if (dens) ref += (*dens)(p)*r;
        }
    }
    ref *= 2 * M_PI / double(nr) / double(nt);
    OpenSetSpec spec = disk_spec();
    double prev = 0;
    for (int j = j_lo; j <= j_hi; ++j) {
        DiracChain Wj = open_set_chain(spec, j, 2);
        double lhs = integrate(w, perp_chain(boundary(Wj)));
        tab.rows.push_back(make_row(j, lhs, ref, prev));
        prev = tab.rows.back().err;
    }
    return tab;
}

ConvergeTable converge_kelvin_stokes(const Form& w, int j_lo, int j_hi) {
    if (w.dim() != 3 || w.grade() != 1)
        throw std::invalid_argument("kelvin-stokes table expects a 1-form on R^3");
    ConvergeTable tab{"kelvin-stokes", {}};
    // planar patch: unit square in the xy-plane at z = 1/2
    const double z0 = 0.5;
    Point a = make_point({0, 0, z0}), b = make_point({1, 0, z0}), c = make_point({1, 1, z0}),
          d4 = make_point({0, 1, z0});
    double ref = edge_integral(w, a, b) + edge_integral(w, b, c) + edge_integral(w, c, d4) +
                 edge_integral(w, d4, a);
    double prev = 0;
    for (int j = j_lo; j <= j_hi; ++j) {
        // interior exhaustion of the patch in its plane
        const double h = std::ldexp(1.0, -j);
        ChainBuilder bb(3, 2);
        const std::int64_t m = std::int64_t(1) << j;
        for (std::int64_t ix = 1; ix + 1 < m; ++ix)
            for (std::int64_t iy = 1; iy + 1 < m; ++iy) {
                ChainTerm t;
                t.point = make_point({(ix + 0.5) * h, (iy + 0.5) * h, z0});
                t.index = MultiIndex::from_axes({1, 2});
                t.coeff = h * h;
                bb.add(t);
            }
        DiracChain Jj = bb.build();
        double lhs = integrate(w, boundary(Jj));
        tab.rows.push_back(make_row(j, lhs, ref, prev));
        prev = tab.rows.back().err;
    }
    return tab;
}

ConvergeTable converge_higher_div(std::uint64_t seed, int s_max, int cases) {
    ConvergeTable tab{"higher-div", {}};
    Rng rng(seed);
    int row = 0;
    for (int s = 1; s <= s_max; ++s)
        for (int c = 0; c < cases; ++c) {
            const int n = rng.integer(2, 3);
            const int k = rng.integer(0, n);
            DiracChain J = rng.random_chain(n, k, 1, 3);
            Form w = random_form(rng, n, k, 4, OracleKind::Analytic);
            DiracChain lapJ = J;
            Form lapw = w;
            for (int i = 0; i < s; ++i) {
                lapJ = laplace(lapJ);
                lapw = d(star(d(star(lapw)))) + star(d(star(d(lapw))));
            }
            double lhs = integrate(w, lapJ);
            double rhs = integrate(lapw, J);
            tab.rows.push_back({row++, lhs, rhs, std::abs(lhs - rhs), 0.0});
        }
    return tab;
}

ConvergeTable converge_change_of_vars(const Form& w, int j_lo, int j_hi) {
    if (w.dim() != 2 || w.grade() != 2)
        throw std::invalid_argument("change-of-vars table expects a 2-form on R^2");
    ConvergeTable tab{"change-of-vars", {}};
    // F(x,y) = (x + y^2/4, y - x^2/4), smooth and orientation-preserving on the square
    std::vector<Expr> comps{
        Expr::coord(1) + Expr::constant(0.25) * Expr::coord(2).pow(2),
        Expr::coord(2) - Expr::constant(0.25) * Expr::coord(1).pow(2)};
    SmoothMap F = SmoothMap::from_exprs(2, comps);
    Form pw = pullback(F, w);
    // reference: classical integral of F*w over the unit square, fine midpoint grid
    double ref = 0;
    const int nq = 1024;
    KVector e12 = KVector::basis(2, MultiIndex::full(2), 1.0);
    for (int ix = 0; ix < nq; ++ix)
        for (int iy = 0; iy < nq; ++iy) {
            Point p = make_point({(ix + 0.5) / nq, (iy + 0.5) / nq});
            ref += pw(p, e12);
        }
    ref /= double(nq) * double(nq);
    double prev = 0;
    for (int j = j_lo; j <= j_hi; ++j) {
        DiracChain Qj = cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, j, 2);
        double lhs = integrate(w, pushforward(F, Qj));
        tab.rows.push_back(make_row(j, lhs, ref, prev));
        prev = tab.rows.back().err;
    }
    return tab;
}

} // namespace chaincalc
