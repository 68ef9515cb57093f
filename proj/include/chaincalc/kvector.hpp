#pragma once

#include "chaincalc/multiindex.hpp"

#include <array>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaincalc {

/// Coefficients with magnitude below this are dropped by canonicalization.
/// Deliberately tiny: algebraic cancellations that are exact in the formulas
/// must cancel exactly in floats, and nothing else may be rounded away.
inline constexpr double kZeroTol = 1e-300;

using Vector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) {
    double s = 0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

/// A grade-k multivector over R^n, stored as a sparse coefficient map on
/// increasing multi-indices.  Canonical form holds no zero coefficients;
/// equality is equality of the canonical maps.
class KVector {
public:
    KVector(int dim, int grade) : dim_(dim), grade_(grade) {
        if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("KVector: bad dimension");
        if (grade < 0) throw std::invalid_argument("KVector: bad grade");
    }

    static KVector basis(int dim, MultiIndex idx, double c = 1.0) {
        KVector v(dim, idx.grade());
        v.add(idx, c);
        return v;
    }
    static KVector scalar(int dim, double c) { return basis(dim, MultiIndex(), c); }
    /// Grade-1 vector from components.
    static KVector from_vector(const Vector& u) {
        KVector v(static_cast<int>(u.size()), 1);
        for (int i = 0; i < static_cast<int>(u.size()); ++i) v.add(MultiIndex::axis(i + 1), u[i]);
        return v;
    }

    int dim() const { return dim_; }
    int grade() const { return grade_; }
    const std::map<MultiIndex, double>& coeffs() const { return coeffs_; }
    bool zero() const { return coeffs_.empty(); }

    double coeff(MultiIndex idx) const {
        auto it = coeffs_.find(idx);
        return it == coeffs_.end() ? 0.0 : it->second;
    }

    void add(MultiIndex idx, double c) {
        if (idx.grade() != grade_) throw std::invalid_argument("KVector::add: grade mismatch");
        if (idx.max_axis() > dim_) throw std::invalid_argument("KVector::add: axis out of range");
        double& slot = coeffs_[idx];
        slot += c;
        if (std::abs(slot) < kZeroTol) coeffs_.erase(idx);
    }

    KVector& operator+=(const KVector& o) {
        require_shape(o);
        for (auto& [idx, c] : o.coeffs_) add(idx, c);
        return *this;
    }
    KVector& operator*=(double s) {
        if (s == 0.0) { coeffs_.clear(); return *this; }
        for (auto& [idx, c] : coeffs_) c *= s;
        return *this;
    }
    friend KVector operator+(KVector a, const KVector& b) { return a += b; }
    friend KVector operator*(double s, KVector a) { return a *= s; }
    friend KVector operator-(KVector a, const KVector& b) { return a += (-1.0) * b; }

    friend bool operator==(const KVector& a, const KVector& b) {
        return a.dim_ == b.dim_ && a.grade_ == b.grade_ && a.coeffs_ == b.coeffs_;
    }

    std::string str() const;

private:
    void require_shape(const KVector& o) const {
        if (o.dim_ != dim_ || o.grade_ != grade_)
            throw std::invalid_argument("KVector: shape mismatch");
    }

    int dim_;
    int grade_;
    std::map<MultiIndex, double> coeffs_;
};

/// Exterior product.  Bilinear, associative, graded-anticommutative.
/// k+l > n yields the zero multivector of the formal grade.
KVector wedge(const KVector& a, const KVector& b);
KVector wedge(const Vector& v, const KVector& b);

/// Determinant inner product extended bilinearly via orthonormality of
/// the e_I basis: <e_I, e_J> = delta_IJ.
double inner(const KVector& a, const KVector& b);

struct Mass {
    double value;
    bool exact; ///< false: `value` is an upper bound on the mass infimum
};

/// Mass of a multivector.  Exact (sqrt of the Gram inner product) whenever
/// every multivector of the grade is simple or simplicity is decidable;
/// otherwise the basis l1 upper bound, flagged.
Mass mass(const KVector& a);

/// Interior contraction by a vector; adjoint of wedge(v, .) under `inner`.
KVector contract(const Vector& v, const KVector& a);

/// Perpendicular complement: the unique linear map with
/// e_I ^ perp(e_I) = (-1)^k e_1..n on basis elements.  Isometric;
/// perp(perp(a)) = (-1)^(k(n-k)+n) a.
KVector perp(const KVector& a);

} // namespace chaincalc
