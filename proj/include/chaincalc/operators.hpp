#pragma once

#include "chaincalc/form.hpp"

namespace chaincalc {

/// The primitive operator algebra on Dirac chains.  All operators are
/// stateless termwise maps over immutable chains; termwise work may run in
/// parallel with results merged in canonical key order.

/// Extrusion E_V: on order-0 terms (p; a) -> (p; V(p) ^ a).  Constant fields
/// act on any order (E_v commutes with the order increments); nonconstant
/// fields expand as sum_i m_{f_i} E_{e_i}.
DiracChain extrude(const VectorFieldSpec& V, const DiracChain& J);

/// Retraction E_V^t: termwise interior contraction by V(p).
DiracChain retract(const VectorFieldSpec& V, const DiracChain& J);

/// Prederivative P_V = boundary E_V + E_V boundary; for constant v this
/// increments the degree slot of each axis with weight v_i.
DiracChain prederiv(const VectorFieldSpec& V, const DiracChain& J);

/// Boundary: sum_i P_{e_i} E_{e_i}^t.  Grade -1, order +1; squares to zero
/// exactly in canonical form.
DiracChain boundary(const DiracChain& J);
DiracChain boundary_serial(const DiracChain& J);

/// Directional boundary P_v E_v^t.
DiracChain dir_boundary(const Vector& v, const DiracChain& J);

/// Termwise perpendicular complement of the multivector part.
DiracChain perp_chain(const DiracChain& J);

/// Geometric coboundary perp(boundary(perp J)): raises grade by one.
DiracChain cobound(const DiracChain& J);

/// Geometric Laplace operator cobound(boundary) + boundary(cobound):
/// preserves grade, raises order by two.
DiracChain laplace(const DiracChain& J);

/// Geometric Dirac operator boundary + cobound; the two graded parts are
/// returned separately (grade k-1 part first, then k+1).
std::vector<DiracChain> dirac_op(const DiracChain& J);

/// Multiplication by a function.  Order-0 terms scale by f(p); order-s terms
/// peel one prederivative at a time (lowest axis first) through the
/// commutator m_f P_v = P_v m_f + m_{L_v f}.  Needs partials of f up to the
/// chain order.
DiracChain mult(const ScalarField& f, const DiracChain& J);

/// Pushforward through a smooth map: order-0 terms map by the Jacobian
/// exterior power; under affine maps any order transports through the
/// constant Jacobian.  Nonaffine maps on order >= 1 terms are rejected.
DiracChain pushforward(const SmoothMap& F, const DiracChain& J);

/// Shape/size facts about an operator application, for reports.
struct OperatorReport {
    std::string name;
    int in_grade = 0, out_grade = 0;
    int in_order = 0, out_order = 0;
    std::size_t in_terms = 0, out_terms = 0;
};
OperatorReport describe(const std::string& name, const DiracChain& in, const DiracChain& out);

} // namespace chaincalc
