#pragma once

#include "chaincalc/flow.hpp"
#include "chaincalc/norms.hpp"
#include "chaincalc/operators.hpp"
#include "chaincalc/product.hpp"
#include "chaincalc/report.hpp"
#include "chaincalc/represent.hpp"

#include <random>

namespace chaincalc {

/// Deterministic generator of dyadic-rational test data.  Chains built here
/// have dyadic coordinates and coefficients so algebraic cancellations are
/// exact in floats.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }
    double uniform() { return double(bits() >> 11) * 0x1.0p-53; }
    int integer(int lo, int hi) { return lo + int(bits() % std::uint64_t(hi - lo + 1)); }
    /// Nonzero dyadic rational k * 2^-scale_bits in [-range, range].
    double dyadic(int scale_bits = 3, double range = 2.0);
    Vector dyadic_vector(int dim, int scale_bits = 3, double range = 2.0);
    MultiIndex random_index(int dim, int grade);
    DiracChain random_chain(int dim, int grade, int max_order, int max_terms);
    /// Random polynomial with small integer coefficients, degree <= deg.
    Expr poly(int dim, int deg, int monomials = 3);

private:
    std::mt19937_64 eng_;
};

/// Oracle flavor for the duality suite.
enum class OracleKind { Analytic, FiniteDifference };

Report run_algebra_suite(std::uint64_t seed, double tol = 1e-12, int iterations = 1000);
Report run_duality_suite(std::uint64_t seed, OracleKind oracle, double tol = 0 /* default per oracle */,
                         int iterations = 60);
Report run_commutator_suite(std::uint64_t seed, double tol = 1e-9, int iterations = 120);
Report run_cartesian_suite(std::uint64_t seed, double tol = 1e-12, int pairs = 500);
Report run_norms_suite(std::uint64_t seed, double tol = 1e-12);

/// Dispatcher used by the CLI; returns nothing for unknown names.
std::optional<Report> run_suite(const std::string& name, std::uint64_t seed, OracleKind oracle,
                                double tol_override /* <=0: per-suite default */);

/// Convergence tables for the classical theorems (drives `converge`).
ConvergeTable converge_stokes(const Form& w, int j_lo, int j_hi);
ConvergeTable converge_gauss_green(const Form& w, int j_lo, int j_hi);
ConvergeTable converge_kelvin_stokes(const Form& w, int j_lo, int j_hi);
ConvergeTable converge_higher_div(std::uint64_t seed, int s_max, int cases);
ConvergeTable converge_change_of_vars(const Form& w, int j_lo, int j_hi);

} // namespace chaincalc
