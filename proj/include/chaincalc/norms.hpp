#pragma once

#include "chaincalc/form.hpp"

namespace chaincalc {

/// One difference-chain summand of a decomposition: the j-fold difference of
/// an order-0 k-element through the vectors of sigma (j <= r).
struct DecompEntry {
    std::vector<Vector> sigma;
    Point base_point{};
    KVector alpha; ///< signed k-vector of the base element

    DecompEntry(std::vector<Vector> s, Point p, KVector a)
        : sigma(std::move(s)), base_point(p), alpha(std::move(a)) {}

    DiracChain chain() const { return difference(sigma, DiracChain::element(base_point, alpha)); }
    /// |sigma_1|...|sigma_j| * mass(alpha); mass upper bounds keep the sum a
    /// valid norm upper bound.
    double cost() const;
};

/// A way to write a chain as a sum of difference chains of order <= r.
struct Decomposition {
    int r = 0;
    std::vector<DecompEntry> entries;

    DiracChain reconstruct(int dim, int grade) const;
    double cost() const;
};

enum class UpperStrategy {
    Trivial, ///< every term its own 0-difference: the mass bound
    Pairing, ///< greedy nearest-point matching into differences, depth <= r
};

struct UpperBound {
    double bound;
    Decomposition witness;
};

/// Certified upper bound from an explicit decomposition; throws (with the
/// residual chain in the message) unless the decomposition reconstructs A
/// exactly.
double norm_upper(const DiracChain& A, int r, const Decomposition& d);

/// Certified upper bound from a built-in strategy.  A must have order 0.
UpperBound norm_upper(const DiracChain& A, int r, UpperStrategy strategy);

/// Dictionary entry for lower bounds: a form with a user-certified upper
/// bound on its B^r norm.
struct CertifiedForm {
    std::string name;
    Form form;
    double norm_bound;
};

struct LowerBound {
    double bound;
    std::string witness; ///< name of the maximizing dictionary entry
};

/// Certified lower bound: max |integral(w, A)| / bound over the dictionary.
/// Empty dictionary yields 0 (with the witness marked accordingly).
LowerBound norm_lower(const DiracChain& A, int r, const std::vector<CertifiedForm>& dict);

/// Two-sided bracket of the B^r norm with its witnesses.
struct NormBound {
    int r = 0;
    double lower = 0;
    double upper = 0;
    std::string lower_witness;
    std::string upper_witness;
};

NormBound norm_bracket(const DiracChain& A, int r, const std::vector<CertifiedForm>& dict,
                       UpperStrategy strategy = UpperStrategy::Pairing);

/// Sampled (non-certified) estimate of a form's B^r norm: max over grid
/// points, components, and derivative degrees <= r of |d^m f_I(p)|.
struct GridSpec {
    Vector lo, hi;
    int steps = 8;
};
double form_norm_estimate(const Form& w, int r, const GridSpec& grid);

/// Region supporting the inside-U test for difference chains.
struct Region {
    std::function<bool(const Point&)> contains;
    bool convex = false;  ///< convex regions need only the vertex test
    int edge_samples = 8; ///< grid density along hull edges otherwise
};

/// True iff every difference chain of the decomposition is inside the region:
/// the convex hull of its support lies in the region.  Exact for convex
/// regions; vertex + edge sampling otherwise.
bool inside_check(const Decomposition& d, const Region& region);

} // namespace chaincalc
