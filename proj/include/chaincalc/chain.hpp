#pragma once

#include "chaincalc/kvector.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chaincalc {

/// Point coordinates, fixed capacity; slots past the ambient dimension stay
/// zero so whole-array comparison is valid at any dimension.
using Point = std::array<double, kMaxDim>;
/// Dipole-order part: per-axis prederivative counts (the symmetric power
/// expanded over the standard basis).
using Degree = std::array<std::uint8_t, kMaxDim>;

inline Point make_point(std::initializer_list<double> xs) {
    Point p{};
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}
inline Point make_point(std::span<const double> xs) {
    Point p{};
    for (std::size_t i = 0; i < xs.size(); ++i) p[i] = xs[i];
    return p;
}
inline int total_degree(const Degree& d) {
    int s = 0;
    for (auto x : d) s += x;
    return s;
}

/// One canonical summand of a Dirac chain: coeff * (point; degree (x) e_index).
/// Order-0 terms (degree = 0) are the k-elements (p; alpha).
struct ChainTerm {
    Point point{};
    Degree degree{};
    MultiIndex index;
    double coeff = 0.0;

    int order() const { return total_degree(degree); }
};

/// Key order: point, then degree, then multi-index.  -0.0 is normalized to
/// +0.0 on entry, so plain numeric comparison is a total order for every
/// value the constructors emit.
struct TermKeyLess {
    bool operator()(const ChainTerm& a, const ChainTerm& b) const {
        if (a.point != b.point) return a.point < b.point;
        if (a.degree != b.degree) return a.degree < b.degree;
        return a.index < b.index;
    }
};
inline bool same_key(const ChainTerm& a, const ChainTerm& b) {
    return a.point == b.point && a.degree == b.degree && a.index == b.index;
}

/// A Dirac k-chain of arbitrary dipole order: a canonical finitely-supported
/// sum of graded point masses.  Terms are sorted, keys unique, coefficients
/// nonzero; all terms share (dim, grade).  Values are immutable after build.
class DiracChain {
public:
    DiracChain(int dim, int grade);

    static DiracChain zero(int dim, int grade) { return DiracChain(dim, grade); }
    /// Single k-element (p; alpha) with alpha given as a KVector.
    static DiracChain element(const Point& p, const KVector& alpha);
    /// Single term, fully specified.
    static DiracChain single(int dim, const ChainTerm& t);

    int dim() const { return dim_; }
    int grade() const { return grade_; }
    /// Max total dipole order over terms (0 for the zero chain).
    int order() const;
    bool zero_chain() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::vector<ChainTerm>& terms() const { return terms_; }

    /// Largest |coeff|, 0 for the zero chain.  The residual metric used by
    /// the identity suites.
    double max_abs_coeff() const;

    friend bool operator==(const DiracChain& a, const DiracChain& b);

    std::string str() const;

private:
    friend class ChainBuilder;
    int dim_;
    int grade_;
    std::vector<ChainTerm> terms_;
};

/// Single-writer accumulator; build() canonicalizes (sort, merge, drop zeros).
class ChainBuilder {
public:
    ChainBuilder(int dim, int grade) : chain_(dim, grade) {}

    void add(const ChainTerm& t);
    void add(const Point& p, const Degree& d, MultiIndex idx, double c);
    void add(const Point& p, const KVector& alpha, const Degree& d = Degree{});
    void append(const DiracChain& c, double scale = 1.0);
    void reserve(std::size_t n) { chain_.terms_.reserve(n); }

    DiracChain build();

private:
    DiracChain chain_;
};

/// ca*a + cb*b in canonical form; exact cancellation when keys match.
DiracChain combine(const DiracChain& a, const DiracChain& b, double ca, double cb);
inline DiracChain operator+(const DiracChain& a, const DiracChain& b) { return combine(a, b, 1, 1); }
inline DiracChain operator-(const DiracChain& a, const DiracChain& b) { return combine(a, b, 1, -1); }
DiracChain scale(const DiracChain& a, double s);

/// T_u: every point shifted by u; degrees, indices, coefficients unchanged.
DiracChain translate(const Vector& u, const DiracChain& a);

/// Difference chain: recursive (T_u - Id) over sigma.  Invariant under
/// permutation of sigma.
DiracChain difference(const std::vector<Vector>& sigma, const DiracChain& base);

/// Points carrying a nonzero term, sorted and unique.
std::vector<Point> support(const DiracChain& a);

/// Keeps exactly the terms whose point satisfies the predicate.
DiracChain restrict_chain(const DiracChain& a, const std::function<bool(const Point&)>& pred);

/// Termwise map: f(term, sink) emits any number of replacement terms.
/// Deterministic regardless of thread count: per-term outputs land in
/// indexed slots and merge in term order.  `map_terms_serial` is the
/// reference implementation the parallel path is tested against.
using TermSink = std::function<void(const ChainTerm&)>;
DiracChain map_terms(const DiracChain& a, int out_grade,
                     const std::function<void(const ChainTerm&, ChainBuilder&)>& f,
                     int out_dim = -1);
DiracChain map_terms_serial(const DiracChain& a, int out_grade,
                            const std::function<void(const ChainTerm&, ChainBuilder&)>& f,
                            int out_dim = -1);

/// Text serialization: header "dim grade", then one term per line
/// "p1 .. pn | d1 .. dn | axes | coeff" with hexadecimal float literals,
/// so round trips are bit-exact.
std::string to_text(const DiracChain& a);
DiracChain from_text(const std::string& text);

} // namespace chaincalc
