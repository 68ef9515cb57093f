#include "chaincalc/product.hpp"

namespace chaincalc {

DiracChain cartesian_wedge(const DiracChain& J, const DiracChain& K) {
    const int n1 = J.dim(), n2 = K.dim();
    if (n1 + n2 > kMaxDim)
        throw std::invalid_argument("cartesian_wedge: product dimension exceeds capacity");
    ChainBuilder b(n1 + n2, J.grade() + K.grade());
    b.reserve(J.size() * K.size());
    for (auto& s : J.terms())
        for (auto& t : K.terms()) {
            ChainTerm u;
            u.point = s.point;
            u.degree = s.degree;
            for (int i = 0; i < n2; ++i) {
                u.point[n1 + i] = t.point[i];
                u.degree[n1 + i] = t.degree[i];
            }
            u.index = MultiIndex(s.index.mask() | t.index.shifted(n1).mask());
            u.coeff = s.coeff * t.coeff;
            b.add(u);
        }
    return b.build();
}

Form product_form(const Form& w, int n1, const Form& eta, int n2) {
    if (w.dim() != n1 || eta.dim() != n2)
        throw std::invalid_argument("product_form: factor dimensions mismatch");
    Form out(n1 + n2, w.grade() + eta.grade());
    for (auto& [I, f] : w.components())
        for (auto& [L, g] : eta.components()) {
            auto ff = f;
            auto gg = g;
            auto field = ScalarField::analytic(
                             [ff, gg, n1, n2](const Degree& m, const Point& p) {
                                 Point x{}, y{};
                                 Degree mx{}, my{};
                                 for (int i = 0; i < n1; ++i) {
                                     x[i] = p[i];
                                     mx[i] = m[i];
                                 }
                                 for (int i = 0; i < n2; ++i) {
                                     y[i] = p[n1 + i];
                                     my[i] = m[n1 + i];
                                 }
                                 return ff.partial(mx, x) * gg.partial(my, y);
                             },
                             std::min(f.budget(), g.budget()))
                             .with_analytic(f.analytic_oracle() && g.analytic_oracle());
            out.set_component(MultiIndex(I.mask() | L.shifted(n1).mask()), field);
        }
    return out;
}

} // namespace chaincalc
