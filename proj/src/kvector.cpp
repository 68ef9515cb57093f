#include "chaincalc/kvector.hpp"

#include <cmath>
#include <sstream>

namespace chaincalc {

std::string KVector::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [idx, c] : coeffs_) {
        if (!first) os << " + ";
        os << c << "*" << idx.str();
        first = false;
    }
    return os.str();
}

KVector wedge(const KVector& a, const KVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
    KVector out(a.dim(), a.grade() + b.grade());
    if (a.grade() + b.grade() > a.dim()) return out; // zero of formal grade
    for (auto& [ia, ca] : a.coeffs())
        for (auto& [ib, cb] : b.coeffs()) {
            int s = wedge_sign(ia, ib);
            if (s) out.add(MultiIndex(ia.mask() | ib.mask()), s * ca * cb);
        }
    return out;
}

KVector wedge(const Vector& v, const KVector& b) {
    return wedge(KVector::from_vector(v), b);
}

double inner(const KVector& a, const KVector& b) {
    if (a.dim() != b.dim() || a.grade() != b.grade())
        throw std::invalid_argument("inner: shape mismatch");
    double s = 0;
    const auto& small = a.coeffs().size() <= b.coeffs().size() ? a : b;
    const auto& large = (&small == &a) ? b : a;
    for (auto& [idx, c] : small.coeffs()) s += c * large.coeff(idx);
    return s;
}

Mass mass(const KVector& a) {
    const int k = a.grade(), n = a.dim();
    const double g = std::sqrt(std::max(0.0, inner(a, a)));
    if (k <= 1 || k >= n - 1) return {g, true};
    if (a.coeffs().size() <= 1) return {g, true};
    if (k == 2 && wedge(a, a).zero()) return {g, true}; // Pluecker test, complete for grade 2
    double l1 = 0;
    for (auto& [idx, c] : a.coeffs()) l1 += std::abs(c);
    return {l1, false};
}

KVector contract(const Vector& v, const KVector& a) {
    if (static_cast<int>(v.size()) != a.dim())
        throw std::invalid_argument("contract: dimension mismatch");
    KVector out(a.dim(), a.grade() - 1 < 0 ? 0 : a.grade() - 1);
    if (a.grade() == 0) return out;
    for (auto& [idx, c] : a.coeffs())
        for (int axis : idx.axes()) {
            if (v[axis - 1] == 0.0) continue;
            int sgn = (idx.position(axis) & 1) ? -1 : 1; // (-1)^(i+1), i 1-based
            out.add(idx.without(axis), sgn * v[axis - 1] * c);
        }
    return out;
}

KVector perp(const KVector& a) {
    const int n = a.dim();
    KVector out(n, n - a.grade());
    for (auto& [idx, c] : a.coeffs())
        out.add(idx.complement(n), perp_sign(idx, n) * c);
    return out;
}

} // namespace chaincalc
