#pragma once

#include "chaincalc/form.hpp"

#include <optional>

namespace chaincalc {

/// Numerics for evolving chains: RK4 for trajectories and the matrix
/// variational equation dM/dt = DV(phi_t(p)) M, midpoint quadrature in time.
struct FlowConfig {
    double h_t = 1e-3;  ///< integrator step
    int quad_n = 32;    ///< midpoint subintervals for trace chains
    /// Optional bounding region; trajectories leaving it raise an error.
    std::optional<std::pair<Vector, Vector>> bounds;
};

struct FlowPoint {
    Point point{};
    std::vector<Vector> jacobian; ///< variational solution, n x n
};

/// Time-t flow map of V at p, with the transported Jacobian.
FlowPoint flow_point(const VectorFieldSpec& V, const Point& p, double t, const FlowConfig& cfg);

/// Pushforward of an order-0 chain through the time-t flow map, termwise.
/// Deterministic for any thread count; evolve_serial is the reference path.
DiracChain evolve(const DiracChain& J, const VectorFieldSpec& V, double t, const FlowConfig& cfg);
DiracChain evolve_serial(const DiracChain& J, const VectorFieldSpec& V, double t,
                         const FlowConfig& cfg);

/// Evolved copies of J at several times in one trajectory pass per term.
/// `times` must be ascending and nonnegative; the cost is a single march to
/// the final time however many samples are requested.
std::vector<DiracChain> evolve_samples(const DiracChain& J, const VectorFieldSpec& V,
                                       const std::vector<double>& times, const FlowConfig& cfg);

/// The trace chain {J_t}_a^b realized as the midpoint time-quadrature
/// sum_m dt * evolve(J, t_m); grade is preserved.
DiracChain trace_chain(const DiracChain& J, const VectorFieldSpec& V, double a, double b,
                       const FlowConfig& cfg);

struct FlowReport {
    std::string name;
    double lhs = 0, rhs = 0;
    double abs_err = 0;
    std::map<std::string, double> extra;
};

/// integral(w, J_b) - integral(w, J_a)  vs  integral(L_V w, {J_t}_a^b).
FlowReport ftc_flow_verify(const DiracChain& J, const VectorFieldSpec& V, const Form& w,
                           double a, double b, const FlowConfig& cfg);

/// integral(d L_V w, {J_t}_a^b)  vs  integral(w, dJ_b) - integral(w, dJ_a).
FlowReport stokes_flow_verify(const DiracChain& J, const VectorFieldSpec& V, const Form& w,
                              double a, double b, const FlowConfig& cfg);

/// Time-indexed families for the Leibniz rule.
using ChainFamilyT = std::function<DiracChain(double)>;
struct TimeForm {
    std::function<Form(double)> at;
    std::function<Form(double)> dt; ///< time derivative, same grade
};

/// d/dt integral(w_t, J_t) (central difference, step fd_h) vs
/// integral(dw_t/dt, J_t) + integral(w_t, dJ_t/dt), with dJ_t/dt taken as the
/// centered chain difference.
FlowReport leibniz_verify(const ChainFamilyT& Jt, const TimeForm& wt, double t, double fd_h);

/// Three-term transport identity at time t for J evolving under V:
///   d/dt integral(w_t, J_t) = integral(dw/dt, J_t) + integral(i_V w, dJ_t)
///                             + integral(dw, E_V J_t)
/// also reported against the two-term (d/dt + L_V) form and a central
/// finite-difference time derivative.
FlowReport reynolds_verify(const DiracChain& J, const VectorFieldSpec& V, const TimeForm& wt,
                           double t, const FlowConfig& cfg, double fd_h = 1e-3);

} // namespace chaincalc
