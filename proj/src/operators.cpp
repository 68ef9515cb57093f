#include "chaincalc/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace chaincalc {

namespace {

Vector unit_vector(int dim, int axis) {
    Vector v(dim, 0.0);
    v[axis - 1] = 1.0;
    return v;
}

/// Wedge a basis vector onto a term's multivector: e_j ^ e_I with sign.
void emit_wedge_axis(const ChainTerm& t, int axis, double weight, ChainBuilder& out) {
    if (t.index.contains(axis)) return;
    int sgn = wedge_sign(MultiIndex::axis(axis), t.index);
    out.add(t.point, t.degree, t.index.with(axis), sgn * weight * t.coeff);
}

/// Contract a basis vector out of a term's multivector.
void emit_contract_axis(const ChainTerm& t, int axis, double weight, ChainBuilder& out) {
    if (!t.index.contains(axis)) return;
    int sgn = (t.index.position(axis) & 1) ? -1 : 1;
    out.add(t.point, t.degree, t.index.without(axis), sgn * weight * t.coeff);
}

DiracChain extrude_constant(const Vector& v, const DiracChain& J) {
    return map_terms(J, J.grade() + 1, [&](const ChainTerm& t, ChainBuilder& out) {
        for (int j = 1; j <= J.dim(); ++j)
            if (v[j - 1] != 0.0) emit_wedge_axis(t, j, v[j - 1], out);
    });
}

DiracChain retract_constant(const Vector& v, const DiracChain& J) {
    return map_terms(J, J.grade() - 1, [&](const ChainTerm& t, ChainBuilder& out) {
        for (int j = 1; j <= J.dim(); ++j)
            if (v[j - 1] != 0.0) emit_contract_axis(t, j, v[j - 1], out);
    });
}

/// m_f on a single term, recursing on the degree vector (lowest axis first;
/// the result is order-independent because mixed partials commute).
/// Expansion of m_f P_v = P_v m_f + m_{L_v f}.
void mult_term(int dim, int grade, const ScalarField& f, const ChainTerm& t, ChainBuilder& out) {
    int axis = 0;
    for (int i = 0; i < kMaxDim; ++i)
        if (t.degree[i]) { axis = i + 1; break; }
    if (axis == 0) {
        ChainTerm s = t;
        s.coeff *= f(t.point);
        out.add(s);
        return;
    }
    ChainTerm peeled = t;
    peeled.degree[axis - 1]--;
    // P_v m_f: multiply the peeled term, then restore the degree slot.
    ChainBuilder sub(dim, grade);
    mult_term(dim, grade, f, peeled, sub);
    DiracChain lower = sub.build();
    for (auto& u : lower.terms()) {
        ChainTerm s = u;
        s.degree[axis - 1]++;
        out.add(s);
    }
    // m_{L_v f}
    mult_term(dim, grade, f.partial_field(axis), peeled, out);
}

} // namespace

DiracChain mult(const ScalarField& f, const DiracChain& J) {
    return map_terms(J, J.grade(), [&](const ChainTerm& t, ChainBuilder& out) {
        mult_term(J.dim(), J.grade(), f, t, out);
    });
}

DiracChain extrude(const VectorFieldSpec& V, const DiracChain& J) {
    if (V.dim() != J.dim()) throw std::invalid_argument("extrude: dimension mismatch");
    if (J.grade() + 1 > J.dim()) throw std::invalid_argument("extrude: grade overflow");
    if (V.constant_field()) return extrude_constant(V.constant_value(), J);
    DiracChain acc = DiracChain::zero(J.dim(), J.grade() + 1);
    for (int i = 1; i <= J.dim(); ++i)
        acc = combine(acc, mult(V.component(i), extrude_constant(unit_vector(J.dim(), i), J)), 1, 1);
    return acc;
}

DiracChain retract(const VectorFieldSpec& V, const DiracChain& J) {
    if (V.dim() != J.dim()) throw std::invalid_argument("retract: dimension mismatch");
    if (J.grade() < 1) return DiracChain::zero(J.dim(), 0);
    if (V.constant_field()) return retract_constant(V.constant_value(), J);
    DiracChain acc = DiracChain::zero(J.dim(), J.grade() - 1);
    for (int i = 1; i <= J.dim(); ++i)
        acc = combine(acc, mult(V.component(i), retract_constant(unit_vector(J.dim(), i), J)), 1, 1);
    return acc;
}

namespace {

void boundary_term(const ChainTerm& t, ChainBuilder& out) {
    for (int axis : t.index.axes()) {
        ChainTerm s = t;
        s.index = t.index.without(axis);
        s.degree[axis - 1]++;
        s.coeff = ((t.index.position(axis) & 1) ? -1 : 1) * t.coeff;
        out.add(s);
    }
}

} // namespace

DiracChain boundary_serial(const DiracChain& J) {
    if (J.grade() == 0) return DiracChain::zero(J.dim(), 0);
    return map_terms_serial(J, J.grade() - 1, [](const ChainTerm& t, ChainBuilder& out) {
        boundary_term(t, out);
    });
}

DiracChain boundary(const DiracChain& J) {
    if (J.grade() == 0) return DiracChain::zero(J.dim(), 0);
    return map_terms(J, J.grade() - 1, [](const ChainTerm& t, ChainBuilder& out) {
        boundary_term(t, out);
    });
}

DiracChain prederiv(const VectorFieldSpec& V, const DiracChain& J) {
    if (V.dim() != J.dim()) throw std::invalid_argument("prederiv: dimension mismatch");
    if (V.constant_field()) {
        const Vector v = V.constant_value();
        return map_terms(J, J.grade(), [&, v](const ChainTerm& t, ChainBuilder& out) {
            for (int i = 1; i <= J.dim(); ++i) {
                if (v[i - 1] == 0.0) continue;
                ChainTerm s = t;
                s.degree[i - 1]++;
                s.coeff = v[i - 1] * t.coeff;
                out.add(s);
            }
        });
    }
    // P_V := boundary E_V + E_V boundary
    DiracChain a = (J.grade() + 1 <= J.dim()) ? boundary(extrude(V, J))
                                              : DiracChain::zero(J.dim(), J.grade());
    if (J.grade() == 0) return a;
    return combine(a, extrude(V, boundary(J)), 1, 1);
}

DiracChain dir_boundary(const Vector& v, const DiracChain& J) {
    auto V = VectorFieldSpec::constant(v);
    return prederiv(V, retract(V, J));
}

DiracChain perp_chain(const DiracChain& J) {
    const int n = J.dim();
    return map_terms(J, n - J.grade(), [n](const ChainTerm& t, ChainBuilder& out) {
        ChainTerm s = t;
        s.index = t.index.complement(n);
        s.coeff = perp_sign(t.index, n) * t.coeff;
        out.add(s);
    });
}

DiracChain cobound(const DiracChain& J) {
    if (J.grade() == J.dim()) return DiracChain::zero(J.dim(), J.dim());
    return perp_chain(boundary(perp_chain(J)));
}

DiracChain laplace(const DiracChain& J) {
    DiracChain a = (J.grade() < J.dim()) ? boundary(cobound(J))
                                         : DiracChain::zero(J.dim(), J.grade());
    DiracChain b = (J.grade() > 0) ? cobound(boundary(J))
                                   : DiracChain::zero(J.dim(), J.grade());
    return combine(a, b, 1, 1);
}

std::vector<DiracChain> dirac_op(const DiracChain& J) {
    return {boundary(J), cobound(J)};
}

namespace {

/// Transport a degree vector through a constant Jacobian: each prederivative
/// slot P_{e_i} becomes sum_l M[l][i] P_{e_l}, expanded multilinearly.
void affine_degree_transport(const std::vector<Vector>& M, const ChainTerm& t, Degree done,
                             Degree remaining, double factor, ChainBuilder& out) {
    int axis = 0;
    for (int i = 0; i < kMaxDim; ++i)
        if (remaining[i]) { axis = i + 1; break; }
    if (axis == 0) {
        ChainTerm s = t;
        s.degree = done;
        s.coeff = factor * t.coeff;
        out.add(s);
        return;
    }
    Degree rest = remaining;
    rest[axis - 1]--;
    for (std::size_t l = 0; l < M.size(); ++l) {
        if (M[l][axis - 1] == 0.0) continue;
        Degree d2 = done;
        d2[l]++;
        affine_degree_transport(M, t, d2, rest, factor * M[l][axis - 1], out);
    }
}

} // namespace

DiracChain pushforward(const SmoothMap& F, const DiracChain& J) {
    if (F.dim_in() != J.dim()) throw std::invalid_argument("pushforward: dimension mismatch");
    const int m = F.dim_out(), k = J.grade();
    if (k > m) throw std::invalid_argument("pushforward: grade exceeds target dimension");
    if (J.order() > 0 && !F.affine_map())
        throw std::invalid_argument("pushforward: order >= 1 terms require an affine map");

    return map_terms(
        J, k,
        [&](const ChainTerm& t, ChainBuilder& out) {
            auto jac = F.jacobian(t.point);
            Point q = make_point(F(t.point));
            KVector pushed = KVector::scalar(m, 1.0);
            if (k > 0) {
                auto cols = t.index.axes();
                std::vector<Vector> colv(k, Vector(m));
                for (int c = 0; c < k; ++c)
                    for (int r = 0; r < m; ++r) colv[c][r] = jac[r][cols[c] - 1];
                pushed = KVector::from_vector(colv[0]);
                for (int c = 1; c < k; ++c) pushed = wedge(pushed, KVector::from_vector(colv[c]));
            }
            for (auto& [idx, c] : pushed.coeffs()) {
                ChainTerm s;
                s.point = q;
                s.index = idx;
                s.coeff = c * t.coeff;
                if (t.order() == 0) out.add(s);
                else affine_degree_transport(jac, s, Degree{}, t.degree, 1.0, out);
            }
        },
        m);
}

OperatorReport describe(const std::string& name, const DiracChain& in, const DiracChain& out) {
    return {name, in.grade(), out.grade(), in.order(), out.order(), in.size(), out.size()};
}

} // namespace chaincalc
