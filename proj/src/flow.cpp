#include "chaincalc/flow.hpp"

#include "chaincalc/operators.hpp"
#include "chaincalc/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace chaincalc {

namespace {

using Mat = std::array<std::array<double, kMaxDim>, kMaxDim>;

struct State {
    Point x{};
    Mat M{};
};

/// Allocation-free evaluation of V and DV for the integrator inner loop.
struct FieldEval {
    const VectorFieldSpec& V;
    int n;

    void value(const Point& x, Point& out) const {
        for (int i = 1; i <= n; ++i) out[i - 1] = V.component(i)(x);
    }
    void jac(const Point& x, Mat& out) const {
        if (V.constant_field()) {
            for (int i = 0; i < n; ++i) out[i].fill(0.0);
            return;
        }
        Degree m{};
        for (int j = 1; j <= n; ++j) {
            m[j - 1] = 1;
            for (int i = 1; i <= n; ++i) out[i - 1][j - 1] = V.component(i).partial(m, x);
            m[j - 1] = 0;
        }
    }
};

void deriv(const FieldEval& f, const State& s, State& out) {
    f.value(s.x, out.x);
    Mat dv;
    f.jac(s.x, dv);
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j) {
            double acc = 0;
            for (int k = 0; k < f.n; ++k) acc += dv[i][k] * s.M[k][j];
            out.M[i][j] = acc;
        }
}

State axpy(const State& s, double h, const State& k, int n) {
    State out = s;
    for (int i = 0; i < n; ++i) out.x[i] += h * k.x[i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.M[i][j] += h * k.M[i][j];
    return out;
}

void check_bounds(const FlowConfig& cfg, const Point& p, int n) {
    if (!cfg.bounds) return;
    for (int i = 0; i < n; ++i)
        if (p[i] < cfg.bounds->first[i] || p[i] > cfg.bounds->second[i])
            throw std::runtime_error("flow_point: trajectory left the bounding region");
}

/// March `s` forward by dt with RK4 steps of size at most cfg.h_t.
void march(const FieldEval& f, State& s, double dt, const FlowConfig& cfg) {
    if (dt == 0.0) return;
    const int steps = std::max(1, int(std::ceil(std::abs(dt) / cfg.h_t)));
    const double h = dt / steps;
    State k1, k2, k3, k4;
    for (int it = 0; it < steps; ++it) {
        deriv(f, s, k1);
        deriv(f, axpy(s, h / 2, k1, f.n), k2);
        deriv(f, axpy(s, h / 2, k2, f.n), k3);
        deriv(f, axpy(s, h, k3, f.n), k4);
        for (int i = 0; i < f.n; ++i)
            s.x[i] += h / 6 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
        for (int i = 0; i < f.n; ++i)
            for (int j = 0; j < f.n; ++j)
                s.M[i][j] += h / 6 * (k1.M[i][j] + 2 * k2.M[i][j] + 2 * k3.M[i][j] + k4.M[i][j]);
        check_bounds(cfg, s.x, f.n);
    }
}

void emit_pushed(const ChainTerm& term, const State& s, int n, ChainBuilder& out) {
    const int k = term.index.grade();
    ChainTerm u;
    u.point = s.x;
    if (k == 0) {
        u.index = term.index;
        u.coeff = term.coeff;
        out.add(u);
        return;
    }
    auto cols = term.index.axes();
    KVector pushed(n, 0);
    for (int c = 0; c < k; ++c) {
        Vector col(n);
        for (int r = 0; r < n; ++r) col[r] = s.M[r][cols[c] - 1];
        pushed = (c == 0) ? KVector::from_vector(col) : wedge(pushed, KVector::from_vector(col));
    }
    for (auto& [idx, c] : pushed.coeffs()) {
        u.index = idx;
        u.coeff = c * term.coeff;
        out.add(u);
    }
}

} // namespace

FlowPoint flow_point(const VectorFieldSpec& V, const Point& p, double t, const FlowConfig& cfg) {
    const int n = V.dim();
    FieldEval f{V, n};
    State s;
    s.x = p;
    for (int i = 0; i < n; ++i) s.M[i][i] = 1.0;
    march(f, s, t, cfg);
    FlowPoint out;
    out.point = s.x;
    out.jacobian.assign(n, Vector(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.jacobian[i][j] = s.M[i][j];
    return out;
}

std::vector<DiracChain> evolve_samples(const DiracChain& J, const VectorFieldSpec& V,
                                       const std::vector<double>& times, const FlowConfig& cfg) {
    if (J.order() != 0) throw std::invalid_argument("evolve: order >= 1 chains unsupported");
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] < 0 || (i && times[i] < times[i - 1]))
            throw std::invalid_argument("evolve_samples: times must be ascending, nonnegative");
    const int n = J.dim();
    const std::size_t nt = times.size(), m = J.size();
    FieldEval f{V, n};

    // per term: one trajectory pass, snapshots into indexed slots
    std::vector<std::vector<ChainTerm>> slots(m * nt);
    par::parallel_for(m, [&](std::size_t ti) {
        const ChainTerm& term = J.terms()[ti];
        State s;
        s.x = term.point;
        for (int i = 0; i < n; ++i) s.M[i][i] = 1.0;
        double t_cur = 0;
        for (std::size_t si = 0; si < nt; ++si) {
            march(f, s, times[si] - t_cur, cfg);
            t_cur = times[si];
            ChainBuilder local(n, J.grade());
            emit_pushed(term, s, n, local);
            slots[ti * nt + si] = local.build().terms();
        }
    });

    std::vector<DiracChain> out;
    out.reserve(nt);
    for (std::size_t si = 0; si < nt; ++si) {
        ChainBuilder b(n, J.grade());
        b.reserve(m);
        for (std::size_t ti = 0; ti < m; ++ti)
            for (auto& t : slots[ti * nt + si]) b.add(t);
        out.push_back(b.build());
    }
    return out;
}

DiracChain evolve_serial(const DiracChain& J, const VectorFieldSpec& V, double t,
                         const FlowConfig& cfg) {
    if (J.order() != 0) throw std::invalid_argument("evolve: order >= 1 chains unsupported");
    const int n = J.dim();
    FieldEval f{V, n};
    return map_terms_serial(J, J.grade(), [&](const ChainTerm& term, ChainBuilder& out) {
        State s;
        s.x = term.point;
        for (int i = 0; i < n; ++i) s.M[i][i] = 1.0;
        march(f, s, t, cfg);
        emit_pushed(term, s, n, out);
    });
}

DiracChain evolve(const DiracChain& J, const VectorFieldSpec& V, double t, const FlowConfig& cfg) {
    if (J.order() != 0) throw std::invalid_argument("evolve: order >= 1 chains unsupported");
    const int n = J.dim();
    FieldEval f{V, n};
    return map_terms(J, J.grade(), [&](const ChainTerm& term, ChainBuilder& out) {
        State s;
        s.x = term.point;
        for (int i = 0; i < n; ++i) s.M[i][i] = 1.0;
        march(f, s, t, cfg);
        emit_pushed(term, s, n, out);
    });
}

namespace {

std::vector<double> midpoint_times(double a, double b, int N) {
    std::vector<double> ts(N);
    for (int m = 0; m < N; ++m) ts[m] = a + (m + 0.5) * (b - a) / N;
    return ts;
}

} // namespace

DiracChain trace_chain(const DiracChain& J, const VectorFieldSpec& V, double a, double b,
                       const FlowConfig& cfg) {
    const int N = std::max(1, cfg.quad_n);
    const double dt = (b - a) / N;
    auto snaps = evolve_samples(J, V, midpoint_times(a, b, N), cfg);
    ChainBuilder acc(J.dim(), J.grade());
    acc.reserve(J.size() * N);
    for (auto& s : snaps) acc.append(s, dt);
    return acc.build();
}

FlowReport ftc_flow_verify(const DiracChain& J, const VectorFieldSpec& V, const Form& w,
                           double a, double b, const FlowConfig& cfg) {
    const int N = std::max(1, cfg.quad_n);
    auto times = midpoint_times(a, b, N);
    times.insert(times.begin(), a);
    times.push_back(b);
    auto snaps = evolve_samples(J, V, times, cfg);
    double lhs = integrate(w, snaps.back()) - integrate(w, snaps.front());
    Form lw = lie(V, w);
    double rhs = 0;
    for (int m = 1; m <= N; ++m) rhs += integrate(lw, snaps[m]);
    rhs *= (b - a) / N;
    return {"ftc_flow", lhs, rhs, std::abs(lhs - rhs), {}};
}

FlowReport stokes_flow_verify(const DiracChain& J, const VectorFieldSpec& V, const Form& w,
                              double a, double b, const FlowConfig& cfg) {
    const int N = std::max(1, cfg.quad_n);
    auto times = midpoint_times(a, b, N);
    times.insert(times.begin(), a);
    times.push_back(b);
    auto snaps = evolve_samples(J, V, times, cfg);
    Form dlw = d(lie(V, w));
    double lhs = 0;
    for (int m = 1; m <= N; ++m) lhs += integrate(dlw, snaps[m]);
    lhs *= (b - a) / N;
    double rhs = integrate(w, boundary(snaps.back())) - integrate(w, boundary(snaps.front()));
    return {"stokes_flow", lhs, rhs, std::abs(lhs - rhs), {}};
}

FlowReport leibniz_verify(const ChainFamilyT& Jt, const TimeForm& wt, double t, double fd_h) {
    const double h = fd_h;
    double lhs = (integrate(wt.at(t + h), Jt(t + h)) - integrate(wt.at(t - h), Jt(t - h))) / (2 * h);
    DiracChain dJ = scale(combine(Jt(t + h), Jt(t - h), 1, -1), 1 / (2 * h));
    double rhs = integrate(wt.dt(t), Jt(t)) + integrate(wt.at(t), dJ);
    return {"leibniz", lhs, rhs, std::abs(lhs - rhs), {}};
}

FlowReport reynolds_verify(const DiracChain& J, const VectorFieldSpec& V, const TimeForm& wt,
                           double t, const FlowConfig& cfg, double fd_h) {
    auto snaps = evolve_samples(J, V, {t - fd_h, t, t + fd_h}, cfg);
    const DiracChain& Jt = snaps[1];
    Form w = wt.at(t);
    double term_dt = integrate(wt.dt(t), Jt);
    double three = term_dt + integrate(interior(V, w), boundary(Jt));
    if (Jt.grade() < Jt.dim()) three += integrate(d(w), extrude(V, Jt));
    double two = term_dt + integrate(w, prederiv(V, Jt));
    double fd = (integrate(wt.at(t + fd_h), snaps[2]) - integrate(wt.at(t - fd_h), snaps[0])) /
                (2 * fd_h);
    FlowReport rep{"reynolds", three, fd, std::abs(three - fd), {}};
    rep.extra["two_term"] = two;
    rep.extra["three_vs_two"] = std::abs(three - two);
    return rep;
}

} // namespace chaincalc
